//! Command dispatch for the `gdof` binary.
//!
//! Every command renders a single artifact (JSON, CSV or SVG text). Exact
//! quantities are written as `"p/q"` strings; Monte Carlo estimates are
//! plain floats.

mod render;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::closed_forms::{alpha_star, classify_regime};
use crate::core_math::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::finite_snr::{tin_slopes, SnrLadder};
use crate::geometry::Point;
use crate::hk_scheme::split_solver;
use crate::region::{
    reciprocal, regions_equal, sweep_alpha, symmetric_gdof, symmetric_gdof_detail, Affine, AlphaTemplate,
    AntennaProfile, ExponentProfile, GdofRegion,
};

pub use render::{parse_grid, parse_point, parse_template};

/// Directory used for artifacts when no `--output` is given.
pub const OUTPUT_DIR_ENV: &str = "GDOF_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Region,
    Sym,
    Sweep,
    Reciprocity,
    Split,
    Simulate,
    Classify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Region => "region",
            Command::Sym => "sym",
            Command::Sweep => "sweep",
            Command::Reciprocity => "reciprocity",
            Command::Split => "split",
            Command::Simulate => "simulate",
            Command::Classify => "classify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

/// Exponents either fixed or as a one-parameter template (for `sweep`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponents {
    Fixed(ExponentProfile),
    Template(AlphaTemplate),
}

#[derive(Debug, Clone)]
pub struct SimulationSettings {
    pub ladder: SnrLadder,
    pub draws: usize,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings { ladder: SnrLadder::default(), draws: 5 }
    }
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub antennas: AntennaProfile,
    pub exponents: Exponents,
    pub grid: Vec<Rational>,
    pub point: Option<Point>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub simulation: SimulationSettings,
}

impl JobSpec {
    pub fn new(command: Command, antennas: AntennaProfile, exponents: Exponents) -> Self {
        JobSpec {
            command,
            antennas,
            exponents,
            grid: Vec::new(),
            point: None,
            format: Format::Json,
            output: None,
            seed: 0,
            simulation: SimulationSettings::default(),
        }
    }

    fn fixed(&self) -> Result<ExponentProfile> {
        match &self.exponents {
            Exponents::Fixed(e) => Ok(*e),
            Exponents::Template(t) if t.entries.iter().all(|e| e.slope == Rational::from_integer(0)) => {
                t.at(Rational::from_integer(0))
            }
            Exponents::Template(_) => Err(Error::Domain(format!(
                "{} needs fixed exponents, not a template in `a`",
                self.command.name()
            ))),
        }
    }

    fn template(&self) -> AlphaTemplate {
        match &self.exponents {
            Exponents::Template(t) => *t,
            Exponents::Fixed(e) => AlphaTemplate { entries: e.as_array().map(Affine::constant) },
        }
    }
}

/// A rendered artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub format: Format,
    pub content: String,
}

fn unsupported(command: Command, format: Format) -> Error {
    Error::Domain(format!("{} output is not available for `{}`", format.extension(), command.name()))
}

fn json_artifact<T: Serialize>(value: &T) -> Artifact {
    let mut content = serde_json::to_string_pretty(value).expect("serializable");
    content.push('\n');
    Artifact { format: Format::Json, content }
}

fn s(x: Rational) -> String {
    x.to_string()
}

/// Runs the job and returns the rendered artifact without touching the
/// filesystem.
pub fn render(spec: &JobSpec) -> Result<Artifact> {
    let ant = &spec.antennas;
    match spec.command {
        Command::Region => {
            let exp = spec.fixed()?;
            let region = GdofRegion::new(ant, &exp);
            match spec.format {
                Format::Json => Ok(json_artifact(&render::region_json(ant, &exp, &region))),
                Format::Csv => Ok(Artifact { format: Format::Csv, content: render::vertices_csv(&region.vertices) }),
                Format::Svg => Ok(Artifact { format: Format::Svg, content: svg::region_plot(ant, &exp, &region) }),
            }
        }
        Command::Sym => {
            let exp = spec.fixed()?;
            let (d_sym, active) = symmetric_gdof_detail(ant, &exp);
            match spec.format {
                Format::Json => Ok(json_artifact(&json!({
                    "antennas": ant.as_array(),
                    "alpha": render::exponent_strings(&exp),
                    "d_sym": s(d_sym),
                    "active_bound_kind": active.name(),
                }))),
                Format::Csv => Ok(Artifact {
                    format: Format::Csv,
                    content: format!("d_sym,active_bound_kind\n{d_sym},{active}\n"),
                }),
                Format::Svg => Err(unsupported(spec.command, spec.format)),
            }
        }
        Command::Sweep => {
            if spec.grid.is_empty() {
                return Err(Error::Domain("sweep needs a nonempty --grid".into()));
            }
            let template = spec.template();
            let sweep = sweep_alpha(ant, &template, &spec.grid)?;
            match spec.format {
                Format::Csv => Ok(Artifact { format: Format::Csv, content: render::sweep_csv(&sweep) }),
                Format::Json => Ok(json_artifact(&render::sweep_json(ant, &template, &sweep))),
                Format::Svg => Ok(Artifact { format: Format::Svg, content: svg::sweep_plot(ant, &template, &sweep) }),
            }
        }
        Command::Reciprocity => {
            let exp = spec.fixed()?;
            let (rant, rexp) = reciprocal(ant, &exp);
            let region = GdofRegion::new(ant, &exp);
            let rregion = GdofRegion::new(&rant, &rexp);
            if spec.format != Format::Json {
                return Err(unsupported(spec.command, spec.format));
            }
            Ok(json_artifact(&json!({
                "antennas": ant.as_array(),
                "alpha": render::exponent_strings(&exp),
                "vertices": render::point_strings(&region.vertices),
                "reciprocal": {
                    "antennas": rant.as_array(),
                    "alpha": render::exponent_strings(&rexp),
                    "vertices": render::point_strings(&rregion.vertices),
                },
                "equal": regions_equal(&region, &rregion),
            })))
        }
        Command::Split => {
            let exp = spec.fixed()?;
            let point = spec.point.ok_or_else(|| Error::Domain("split needs --point d1,d2".into()))?;
            let split = split_solver(ant, &exp, point)?;
            match spec.format {
                Format::Json => Ok(json_artifact(&json!({
                    "antennas": ant.as_array(),
                    "alpha": render::exponent_strings(&exp),
                    "point": [s(point.0), s(point.1)],
                    "split": {
                        "d1c": s(split.d1c),
                        "d1p": s(split.d1p),
                        "d2c": s(split.d2c),
                        "d2p": s(split.d2p),
                    },
                }))),
                Format::Csv => Ok(Artifact {
                    format: Format::Csv,
                    content: format!(
                        "d1,d2,d1c,d1p,d2c,d2p\n{},{},{},{},{},{}\n",
                        point.0, point.1, split.d1c, split.d1p, split.d2c, split.d2p
                    ),
                }),
                Format::Svg => Err(unsupported(spec.command, spec.format)),
            }
        }
        Command::Simulate => {
            let exp = spec.fixed()?;
            if spec.format != Format::Json {
                return Err(unsupported(spec.command, spec.format));
            }
            let settings = &spec.simulation;
            let (t1, t2) = tin_slopes(*ant, exp, &settings.ladder, settings.draws, spec.seed)?;
            let est = |e: crate::finite_snr::SlopeEstimate| json!({"slope": e.value, "spread": e.per_draw_spread});
            Ok(json_artifact(&json!({
                "antennas": ant.as_array(),
                "alpha": render::exponent_strings(&exp),
                "seed": spec.seed,
                "draws": settings.draws,
                "snr": settings.ladder.values(),
                "tin": {"user1": est(t1), "user2": est(t2)},
                "fundamental_sym": s(symmetric_gdof(ant, &exp)),
            })))
        }
        Command::Classify => {
            let exp = spec.fixed()?;
            let AntennaProfile { m1, n1, m2, n2 } = *ant;
            if m1 != m2 || n1 != n2 || exp.a12 != exp.a21 || exp.a22 != exp.a11 {
                return Err(Error::Domain(
                    "classify needs an (M,N,M,N) channel with exponents [1,a,a,1]".into(),
                ));
            }
            // regimes of (M,N,M,N) and its reciprocal (N,M,N,M) coincide
            let (m, n) = (m1.max(n1), m1.min(n1));
            let alpha = exp.a12;
            let regime = classify_regime(m, n, alpha)?;
            if spec.format != Format::Json {
                return Err(unsupported(spec.command, spec.format));
            }
            Ok(json_artifact(&json!({
                "antennas": ant.as_array(),
                "alpha": s(alpha),
                "regime": regime.to_string(),
                "alpha_star": s(alpha_star(m, n)?),
                "d_sym": s(symmetric_gdof(ant, &exp)),
            })))
        }
    }
}

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let io_err = |source| Error::Io { path: path.display().to_string(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Domain(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}

/// Where the artifact goes: `--output`, else `$GDOF_OUTPUT_DIR/<command>.<ext>`,
/// else standard output (`None`).
pub fn destination(spec: &JobSpec) -> Option<PathBuf> {
    spec.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{}.{}", spec.command.name(), spec.format.extension())))
    })
}

/// Renders the job and writes the artifact. Returns the written path, or
/// `None` when the artifact went to standard output.
pub fn run(spec: &JobSpec) -> Result<Option<PathBuf>> {
    let artifact = render(spec)?;
    match destination(spec) {
        Some(path) => {
            write_atomic(&path, &artifact.content)?;
            Ok(Some(path))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(artifact.content.as_bytes())
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
            Ok(None)
        }
    }
}

/// Machine-readable error document printed on failure.
pub fn error_json(err: &Error) -> String {
    json!({"error": err.kind(), "message": err.to_string()}).to_string()
}

/// Parses `--alpha`: four comma-separated exponents, or one value `a`
/// meaning `[1, a, a, 1]`.
pub fn parse_exponents(text: &str) -> Result<ExponentProfile> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [single] => ExponentProfile::symmetric(parse_rational(single)?),
        [a, b, c, d] => ExponentProfile::new(
            parse_rational(a)?,
            parse_rational(b)?,
            parse_rational(c)?,
            parse_rational(d)?,
        ),
        _ => Err(Error::Parse(format!("expected 1 or 4 exponents, got {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_math::{int, rat};

    fn job(command: Command, ant: [u32; 4], alpha: &str) -> JobSpec {
        let [m1, n1, m2, n2] = ant;
        let antennas = AntennaProfile::new(m1, n1, m2, n2).unwrap();
        let exponents = if alpha.contains('a') {
            Exponents::Template(parse_template(alpha).unwrap())
        } else {
            Exponents::Fixed(parse_exponents(alpha).unwrap())
        };
        JobSpec::new(command, antennas, exponents)
    }

    #[test]
    fn region_json_has_point_b() {
        let out = render(&job(Command::Region, [3, 3, 2, 2], "1,2/3,2/3,1")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.content).unwrap();
        let vertices = v["vertices"].as_array().unwrap();
        assert!(vertices.iter().any(|p| p[0] == "1" && p[1] == "2"));
        assert_eq!(v["bounds"].as_array().unwrap().len(), 7);
        assert_eq!(v["bounds"][6]["kind"], "D7");
        assert_eq!(v["bounds"][6]["rhs"], "5");
        assert_eq!(v["alpha"][1], "2/3");
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(parse_exponents("1/2").unwrap(), ExponentProfile::symmetric(rat(1, 2)).unwrap());
        assert_eq!(
            parse_exponents("1,0.25,1/3,2").unwrap(),
            ExponentProfile::new(int(1), rat(1, 4), rat(1, 3), int(2)).unwrap()
        );
        assert!(matches!(parse_exponents("2,1,1,1"), Err(Error::Unnormalized { .. })));
        assert!(parse_exponents("1,1").is_err());
    }

    #[test]
    fn reciprocity_equal() {
        let out = render(&job(Command::Reciprocity, [2, 3, 1, 2], "1,1/3,3/4,5/6")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.content).unwrap();
        assert_eq!(v["equal"], true);
        assert_eq!(v["reciprocal"]["antennas"], json!([3, 2, 2, 1]));
    }

    #[test]
    fn split_feasible_and_outside_rejected() {
        let mut spec = job(Command::Split, [3, 3, 2, 2], "1,2/3,2/3,1");
        spec.point = Some((int(1), int(2)));
        let v: serde_json::Value = serde_json::from_str(&render(&spec).unwrap().content).unwrap();
        assert_eq!(v["split"]["d1p"], "1");
        assert_eq!(v["split"]["d2p"], "2/3");
        spec.point = Some((int(3), int(2)));
        assert!(matches!(render(&spec), Err(Error::OutsideRegion { .. })));
        spec.point = None;
        assert!(render(&spec).is_err());
    }

    #[test]
    fn sweep_csv_breakpoints() {
        let mut spec = job(Command::Sweep, [1, 1, 1, 1], "1,a,a,1");
        spec.grid = parse_grid("0:3:1/60").unwrap();
        spec.format = Format::Csv;
        let out = render(&spec).unwrap().content;
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "alpha,d_sym,active_bound_kind,is_breakpoint");
        let breaks: Vec<&str> =
            lines.filter(|l| l.ends_with(",true")).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(breaks, vec!["1/2", "2/3", "1", "2"]);
    }

    #[test]
    fn classify_uses_reciprocal_for_m_below_n() {
        let out = render(&job(Command::Classify, [2, 3, 2, 3], "7/4")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.content).unwrap();
        assert_eq!(v["regime"], "very_strong");
        assert_eq!(v["alpha_star"], "3/2");
        assert!(render(&job(Command::Classify, [2, 3, 3, 2], "1/2")).is_err());
    }

    #[test]
    fn unsupported_format() {
        let mut spec = job(Command::Reciprocity, [1, 1, 1, 1], "1/2");
        spec.format = Format::Svg;
        assert!(matches!(render(&spec), Err(Error::Domain(_))));
    }

    #[test]
    fn template_rejected_where_fixed_needed() {
        assert!(render(&job(Command::Region, [1, 1, 1, 1], "1,a,a,1")).is_err());
        // a template without `a` behaves like fixed exponents
        assert!(render(&job(Command::Region, [1, 1, 1, 1], "1,1/2,1/2,1")).is_ok());
    }

    #[test]
    fn error_document() {
        let e = Error::Unnormalized { alpha11: "2".into() };
        let v: serde_json::Value = serde_json::from_str(&error_json(&e)).unwrap();
        assert_eq!(v["error"], "unnormalized_exponents");
        assert!(v["message"].as_str().unwrap().contains("rescale"));
    }
}
