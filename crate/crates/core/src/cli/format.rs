//! Plain-text circuit, state and material files.
//!
//! Circuit file:
//!
//! ```text
//! rails 2
//! window 8
//! active ell=0,1,2,3 pol=H     # optional
//! stage hwp theta=22.5deg rail=0
//! stage pbs rail_a=0 rail_b=1
//! ```
//!
//! State file: `amp rail=<r> pol=<H|V> ell=<l> re=<x> im=<y>` per line.
//! Material file: `material <name> no=<x> ne=<y> wavelength=<nm>` per line.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use thiserror::Error;

use crate::circuits::{ActiveSubspace, Circuit};
use crate::elements::Element;
use crate::geometry::Material;
use crate::hilbert::{ModeIndex, Pol, Space, State};

/// Tolerance on `sum |a|^2 = 1` for state files.
pub const STATE_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

type Parsed<T> = std::result::Result<T, ParseError>;

fn fail<T>(line: usize, message: impl Into<String>) -> Parsed<T> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

/// `key=value` arguments of one directive. Every key must be consumed.
struct Args<'a> {
    line: usize,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Args<'a> {
    fn parse(line: usize, words: &[&'a str]) -> Parsed<Self> {
        let mut values = BTreeMap::new();
        for w in words {
            let Some((k, v)) = w.split_once('=') else {
                return fail(line, format!("expected key=value, found `{w}`"));
            };
            if k.is_empty() || v.is_empty() {
                return fail(line, format!("malformed argument `{w}`"));
            }
            if values.insert(k, v).is_some() {
                return fail(line, format!("duplicate key `{k}`"));
            }
        }
        Ok(Args { line, values })
    }

    fn take(&mut self, key: &str) -> Parsed<&'a str> {
        match self.values.remove(key) {
            Some(v) => Ok(v),
            None => fail(self.line, format!("missing key `{key}`")),
        }
    }

    fn number<N: std::str::FromStr>(&mut self, key: &str) -> Parsed<N> {
        let v = self.take(key)?;
        v.parse()
            .or_else(|_| fail(self.line, format!("invalid value `{v}` for `{key}`")))
    }

    fn angle(&mut self, key: &str) -> Parsed<f64> {
        let v = self.take(key)?;
        parse_degrees(v).map_err(|m| ParseError {
            line: self.line,
            message: format!("`{key}`: {m}"),
        })
    }

    fn pol(&mut self, key: &str) -> Parsed<Pol> {
        let v = self.take(key)?;
        v.parse()
            .or_else(|_| fail(self.line, format!("invalid polarization `{v}`")))
    }

    fn finish(self) -> Parsed<()> {
        match self.values.keys().next() {
            Some(k) => fail(self.line, format!("unknown key `{k}`")),
            None => Ok(()),
        }
    }
}

/// `<number>deg` to radians. The unit suffix is mandatory.
pub fn parse_degrees(s: &str) -> std::result::Result<f64, String> {
    let Some(num) = s.strip_suffix("deg") else {
        return Err(format!("angle `{s}` needs a `deg` suffix"));
    };
    match num.parse::<f64>() {
        Ok(d) if d.is_finite() => Ok(d.to_radians()),
        _ => Err(format!("invalid angle `{s}`")),
    }
}

/// Radians as `<number>deg`, choosing a decimal that parses back to exactly
/// `rad` when one exists near `rad.to_degrees()`.
pub fn format_degrees(rad: f64) -> String {
    let centre = rad.to_degrees();
    let mut lo = centre;
    let mut hi = centre;
    for _ in 0..64 {
        for d in [lo, hi] {
            if d.to_radians() == rad {
                return format!("{d}deg");
            }
        }
        lo = lo.next_down();
        hi = hi.next_up();
    }
    format!("{centre}deg")
}

fn element_line(e: &Element<f64>) -> String {
    match *e {
        Element::DovePrism { alpha, rail } => {
            format!("dove alpha={} rail={rail}", format_degrees(alpha))
        }
        Element::HalfWavePlate { theta, rail } => {
            format!("hwp theta={} rail={rail}", format_degrees(theta))
        }
        Element::Psdp { rail } => format!("psdp rail={rail}"),
        Element::PsdpRotated { alpha, rail } => {
            format!("psdp_rotated alpha={} rail={rail}", format_degrees(alpha))
        }
        Element::SpiralPhasePlate { q, rail } => format!("spp q={q} rail={rail}"),
        Element::SelectiveSlm { pol, shift, rail } => {
            format!("slm pol={pol} shift={shift} rail={rail}")
        }
        Element::BeamSplitter { rail_a, rail_b } => format!("bs rail_a={rail_a} rail_b={rail_b}"),
        Element::PolarizingBeamSplitter { rail_a, rail_b } => {
            format!("pbs rail_a={rail_a} rail_b={rail_b}")
        }
        Element::Mirror { rail } => format!("mirror rail={rail}"),
        Element::OamHadamard {
            ell_plus,
            ell_minus,
            rail,
        } => format!("oam_hadamard ell_plus={ell_plus} ell_minus={ell_minus} rail={rail}"),
        Element::ZPower { n, modulus, rail } => format!("z n={n} N={modulus} rail={rail}"),
    }
}

fn parse_element(line: usize, name: &str, args: &mut Args<'_>) -> Parsed<Element<f64>> {
    let e = match name {
        "dove" => Element::DovePrism {
            alpha: args.angle("alpha")?,
            rail: args.number("rail")?,
        },
        "hwp" => Element::HalfWavePlate {
            theta: args.angle("theta")?,
            rail: args.number("rail")?,
        },
        "psdp" => Element::Psdp {
            rail: args.number("rail")?,
        },
        "psdp_rotated" => Element::PsdpRotated {
            alpha: args.angle("alpha")?,
            rail: args.number("rail")?,
        },
        "spp" => Element::SpiralPhasePlate {
            q: args.number("q")?,
            rail: args.number("rail")?,
        },
        "slm" => Element::SelectiveSlm {
            pol: args.pol("pol")?,
            shift: args.number("shift")?,
            rail: args.number("rail")?,
        },
        "bs" => Element::BeamSplitter {
            rail_a: args.number("rail_a")?,
            rail_b: args.number("rail_b")?,
        },
        "pbs" => Element::PolarizingBeamSplitter {
            rail_a: args.number("rail_a")?,
            rail_b: args.number("rail_b")?,
        },
        "mirror" => Element::Mirror {
            rail: args.number("rail")?,
        },
        "oam_hadamard" => Element::OamHadamard {
            ell_plus: args.number("ell_plus")?,
            ell_minus: args.number("ell_minus")?,
            rail: args.number("rail")?,
        },
        "z" => Element::ZPower {
            n: args.number("n")?,
            modulus: args.number("N")?,
            rail: args.number("rail")?,
        },
        other => return fail(line, format!("unknown element `{other}`")),
    };
    Ok(e)
}

fn parse_ell_list(line: usize, s: &str) -> Parsed<Vec<i32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .or_else(|_| fail(line, format!("invalid OAM value `{t}`")))
        })
        .collect()
}

fn single<'a>(line: usize, words: &[&'a str], what: &str) -> Parsed<&'a str> {
    match words {
        [v] => Ok(v),
        _ => fail(line, format!("`{what}` takes exactly one value")),
    }
}

pub fn parse_circuit(text: &str) -> Parsed<Circuit<f64>> {
    let mut rails: Option<usize> = None;
    let mut window: Option<u32> = None;
    let mut active: Option<(usize, ActiveSubspace)> = None;
    let mut circuit: Option<Circuit<f64>> = None;
    let mut last_line = 0;

    for (line, words) in directives(text) {
        last_line = line;
        let (head, rest) = (words[0], &words[1..]);
        if head != "stage" && circuit.is_some() {
            return fail(line, format!("`{head}` must precede the first stage"));
        }
        match head {
            "rails" => {
                if rails.is_some() {
                    return fail(line, "duplicate `rails`");
                }
                let v = single(line, rest, "rails")?;
                rails = Some(
                    v.parse()
                        .or_else(|_| fail(line, format!("invalid rail count `{v}`")))?,
                );
            }
            "window" => {
                if window.is_some() {
                    return fail(line, "duplicate `window`");
                }
                let v = single(line, rest, "window")?;
                window = Some(
                    v.parse()
                        .or_else(|_| fail(line, format!("invalid window `{v}`")))?,
                );
            }
            "active" => {
                if active.is_some() {
                    return fail(line, "duplicate `active`");
                }
                let mut args = Args::parse(line, rest)?;
                let ells = parse_ell_list(line, args.take("ell")?)?;
                let pol = args.pol("pol")?;
                args.finish()?;
                active = Some((line, ActiveSubspace::new(pol, ells)));
            }
            "stage" => {
                if circuit.is_none() {
                    let (Some(r), Some(w)) = (rails, window) else {
                        return fail(line, "`rails` and `window` must precede the first stage");
                    };
                    circuit = Some(start(line, r, w, active.take())?);
                }
                let Some((&name, params)) = rest.split_first() else {
                    return fail(line, "`stage` needs an element name");
                };
                let mut args = Args::parse(line, params)?;
                let element = parse_element(line, name, &mut args)?;
                args.finish()?;
                let c = circuit.as_mut().expect("created above");
                c.push(element).or_else(|e| fail(line, e.to_string()))?;
            }
            other => return fail(line, format!("unknown directive `{other}`")),
        }
    }

    match circuit {
        Some(c) => Ok(c),
        None => {
            let (Some(r), Some(w)) = (rails, window) else {
                return fail(last_line.max(1), "missing `rails` or `window` header");
            };
            start(last_line.max(1), r, w, active)
        }
    }
}

fn start(
    line: usize,
    rails: usize,
    window: u32,
    active: Option<(usize, ActiveSubspace)>,
) -> Parsed<Circuit<f64>> {
    let space = Space::new(rails, window).or_else(|e| fail(line, e.to_string()))?;
    let mut c = Circuit::new(space);
    if let Some((at, a)) = active {
        c.set_active(Some(a)).or_else(|e| fail(at, e.to_string()))?;
    }
    Ok(c)
}

/// Canonical text form; [`parse_circuit`] reads it back to an equal circuit.
pub fn print_circuit(c: &Circuit<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "rails {}", c.space().rails()).unwrap();
    writeln!(out, "window {}", c.space().window()).unwrap();
    if let Some(a) = c.active() {
        let ells: Vec<String> = a.ells().iter().map(|l| l.to_string()).collect();
        writeln!(out, "active ell={} pol={}", ells.join(","), a.pol()).unwrap();
    }
    for stage in c.stages() {
        writeln!(out, "stage {}", element_line(stage)).unwrap();
    }
    out
}

/// State over `space`; omitted modes are zero, the norm must be 1 within
/// [`STATE_NORM_TOL`].
pub fn parse_state(text: &str, space: Space) -> Parsed<State<f64>> {
    let mut amps = vec![Complex64::new(0.0, 0.0); space.dim()];
    let mut seen = vec![false; space.dim()];
    let mut last_line = 0;
    for (line, words) in directives(text) {
        last_line = line;
        if words[0] != "amp" {
            return fail(line, format!("unknown directive `{}`", words[0]));
        }
        let mut args = Args::parse(line, &words[1..])?;
        let mode = ModeIndex::new(args.number("rail")?, args.pol("pol")?, args.number("ell")?);
        let re: f64 = args.number("re")?;
        let im: f64 = args.number("im")?;
        args.finish()?;
        if !(re.is_finite() && im.is_finite()) {
            return fail(line, "amplitude must be finite");
        }
        let Some(i) = space.index_of(mode) else {
            return fail(line, format!("mode {mode} lies outside the circuit space"));
        };
        if std::mem::replace(&mut seen[i], true) {
            return fail(line, format!("duplicate amplitude for {mode}"));
        }
        amps[i] = Complex64::new(re, im);
    }
    State::with_tolerance(space, amps, STATE_NORM_TOL)
        .or_else(|e| fail(last_line.max(1), e.to_string()))
}

pub fn print_state(psi: &State<f64>) -> String {
    let mut out = String::new();
    for (m, a) in psi.iter() {
        if a.norm_sqr() > 0.0 {
            writeln!(
                out,
                "amp rail={} pol={} ell={} re={} im={}",
                m.rail, m.pol, m.ell, a.re, a.im
            )
            .unwrap();
        }
    }
    out
}

pub fn parse_materials(text: &str) -> Parsed<Vec<Material>> {
    let mut out: Vec<Material> = Vec::new();
    for (line, words) in directives(text) {
        if words[0] != "material" {
            return fail(line, format!("unknown directive `{}`", words[0]));
        }
        let Some((&name, params)) = words[1..].split_first() else {
            return fail(line, "`material` needs a name");
        };
        if name.contains('=') {
            return fail(line, "`material` needs a name before its parameters");
        }
        if out.iter().any(|m| m.name == name) {
            return fail(line, format!("duplicate material `{name}`"));
        }
        let mut args = Args::parse(line, params)?;
        let m = Material {
            name: name.to_string(),
            n_o: args.number("no")?,
            n_e: args.number("ne")?,
            wavelength_nm: args.number("wavelength")?,
        };
        args.finish()?;
        if !(m.n_o > 0.0 && m.n_e > 0.0 && m.wavelength_nm > 0.0) {
            return fail(line, "indices and wavelength must be positive");
        }
        out.push(m);
    }
    Ok(out)
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "material {} no={} ne={} wavelength={}",
            self.name, self.n_o, self.n_e, self.wavelength_nm
        )
    }
}
