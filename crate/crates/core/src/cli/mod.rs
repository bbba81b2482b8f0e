//! Command-line front end. Every command writes tab-separated text.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::circuits::{check_gate, mz_tree, pos_tree, resource_count, run_sort, Circuit, GateName};
use crate::error::Error;
use crate::geometry::{beta_zero_opd, builtin_materials, validate_assembly, Crystal, Material};
use crate::hilbert::{apply, Pol};

pub use format::{
    format_degrees, parse_circuit, parse_degrees, parse_materials, parse_state, print_circuit,
    print_state, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// Probabilities below this print as zero at 12 decimals and are omitted.
const PROB_FLOOR: f64 = 5e-13;
/// Routing tolerance for `sort`.
const SORT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "psdp-sim",
    version,
    about = "Hybrid polarization/OAM linear-optics simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeKindArg {
    Mz,
    Pos,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate a state through a circuit and print output amplitudes.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Compare a prebuilt gate with its logical truth table.
    GateCheck {
        /// cnot, swap, x, x2, x3 or z.
        #[arg(
            value_name = "NAME",
            required_unless_present = "gate",
            conflicts_with = "gate"
        )]
        name: Option<GateName>,
        #[arg(long)]
        gate: Option<GateName>,
    },
    /// Route |ell>, 0 <= ell < N, through a sorter tree.
    Sort {
        #[arg(long, value_enum)]
        kind: TreeKindArg,
        #[arg(long)]
        n: usize,
    },
    /// Refraction, path difference and TIR check for a crystal cube.
    Crystal {
        /// Material name (built-in or from --material-db).
        material: Option<String>,
        #[arg(long = "no")]
        n_o: Option<f64>,
        #[arg(long = "ne")]
        n_e: Option<f64>,
        /// Cross-section side, mm.
        #[arg(long, default_value_t = 10.0)]
        d: f64,
        /// Interface angle, e.g. `45deg`. Defaults to the zero-OPD angle.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long = "material-db")]
        material_db: Option<PathBuf>,
    },
    /// Element counts of a sorter tree or a circuit file.
    Resources {
        #[arg(long, value_enum, requires = "n", conflicts_with = "circuit")]
        kind: Option<TreeKindArg>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, required_unless_present = "kind")]
        circuit: Option<PathBuf>,
    },
}

/// Input error reported on stderr with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{}:{}: {}", path.display(), e.line, e.message)))
}

fn load_circuit(path: &Path) -> Result<Circuit<f64>, Failure> {
    parsed(path, parse_circuit(&read(path)?))
}

fn tree(kind: TreeKindArg, n: usize) -> Result<Circuit<f64>, Failure> {
    Ok(match kind {
        TreeKindArg::Mz => mz_tree(n)?,
        TreeKindArg::Pos => pos_tree(n)?,
    })
}

fn clean(x: f64) -> f64 {
    if x.abs() < PROB_FLOOR {
        0.0
    } else {
        x
    }
}

fn simulate(out: &mut dyn Write, circuit: &Path, state: &Path) -> Outcome {
    let c = load_circuit(circuit)?;
    let psi = parsed(state, parse_state(&read(state)?, c.space()))?;
    if let Some(active) = c.active() {
        if let Some((m, _)) = psi
            .iter()
            .find(|(m, a)| a.norm_sqr() > 0.0 && !active.contains(*m))
        {
            return Err(Failure(format!(
                "{}: mode {m} lies outside the circuit's active subspace",
                state.display()
            )));
        }
    }
    let u = c.compile()?;
    let phi = apply(&u, &psi)?;
    writeln!(out, "rail\tpol\tell\tprob\tre\tim").map_err(io)?;
    for (m, a) in phi.iter() {
        let p = a.norm_sqr();
        if p >= PROB_FLOOR {
            writeln!(
                out,
                "{}\t{}\t{}\t{:.12}\t{:.12}\t{:.12}",
                m.rail,
                m.pol,
                m.ell,
                p,
                clean(a.re),
                clean(a.im)
            )
            .map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn io(e: std::io::Error) -> Failure {
    Failure(format!("write error: {e}"))
}

fn gate_check(out: &mut dyn Write, name: GateName) -> Outcome {
    let report = check_gate(name)?;
    write!(out, "{report}").map_err(io)?;
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn sort(out: &mut dyn Write, kind: TreeKindArg, n: usize) -> Outcome {
    let c = tree(kind, n)?;
    let inputs: Vec<i32> = (0..n as i32).collect();
    let report = run_sort(&c, &inputs, 0, Pol::H)?;
    write!(out, "{report}").map_err(io)?;
    Ok(if report.is_rail_permutation(SORT_TOL) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn resources(
    out: &mut dyn Write,
    kind: Option<TreeKindArg>,
    n: Option<usize>,
    circuit: Option<&Path>,
) -> Outcome {
    let c = match (kind, n, circuit) {
        (Some(k), Some(n), _) => tree(k, n)?,
        (_, _, Some(path)) => load_circuit(path)?,
        _ => return Err(Failure("give --kind with --n, or --circuit".into())),
    };
    writeln!(out, "kind\tcount").map_err(io)?;
    for (kind, count) in resource_count(&c) {
        writeln!(out, "{kind}\t{count}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn find_material(name: &str, db: Option<&Path>) -> Result<Material, Failure> {
    let mut table = match db {
        Some(path) => parsed(path, parse_materials(&read(path)?))?,
        None => Vec::new(),
    };
    table.extend(builtin_materials());
    table
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| Failure(format!("unknown material `{name}`")))
}

struct CrystalArgs {
    material: Option<String>,
    n_o: Option<f64>,
    n_e: Option<f64>,
    d: f64,
    beta: Option<String>,
    material_db: Option<PathBuf>,
}

fn crystal(out: &mut dyn Write, a: CrystalArgs) -> Outcome {
    let base = match &a.material {
        Some(name) => Some(find_material(name, a.material_db.as_deref())?),
        None => None,
    };
    let n_o = a.n_o.or(base.as_ref().map(|m| m.n_o));
    let n_e = a.n_e.or(base.as_ref().map(|m| m.n_e));
    let (Some(n_o), Some(n_e)) = (n_o, n_e) else {
        return Err(Failure("give a material or both --no and --ne".into()));
    };
    let wavelength = base.as_ref().map_or(589.3, |m| m.wavelength_nm);
    let name = a.material.as_deref().unwrap_or("custom");

    let w = |out: &mut dyn Write, k: &str, v: String| writeln!(out, "{k}\t{v}").map_err(io);
    w(out, "material", name.to_string())?;
    w(out, "n_o", format!("{n_o}"))?;
    w(out, "n_e", format!("{n_e}"))?;
    w(out, "d_mm", format!("{}", a.d))?;
    w(out, "wavelength_nm", format!("{wavelength}"))?;

    if n_e >= n_o {
        w(out, "status", "degenerate".into())?;
        let why = if n_e == n_o {
            "no birefringence: the rays do not separate and the path difference is undefined"
        } else {
            "positive uniaxial crystal: no zero-path-difference design angle"
        };
        w(out, "reason", why.into())?;
        return Err(Failure(Error::NotNegativeUniaxial { n_o, n_e }.to_string()));
    }

    let beta = match &a.beta {
        Some(s) => parse_degrees(s).map_err(|m| Failure(format!("--beta: {m}")))?,
        None => beta_zero_opd(n_o, n_e)?,
    };
    let spec = Crystal::new(n_o, n_e, a.d, beta)?.with_wavelength(wavelength);
    let r = validate_assembly(&spec)?;
    let flag = |b: bool| if b { "true" } else { "false" }.to_string();
    w(out, "beta_deg", format!("{:.3}", beta.to_degrees()))?;
    w(out, "delta_deg", format!("{:.3}", r.delta.to_degrees()))?;
    w(
        out,
        "beta_recommended_deg",
        format!("{:.3}", r.beta_recommended.to_degrees()),
    )?;
    w(
        out,
        "delta_recommended_deg",
        format!("{:.3}", r.delta_recommended.to_degrees()),
    )?;
    w(out, "opd_mm", format!("{:.12}", clean(r.opd_mm)))?;
    w(out, "zero_opd", flag(r.zero_opd))?;
    w(out, "tir_margin", format!("{:.6}", r.tir_margin))?;
    w(out, "tir_ok", flag(r.tir_ok))?;
    w(out, "compensator_needed", flag(r.compensator_needed))?;
    Ok(if r.tir_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn execute(out: &mut dyn Write, command: Command) -> Outcome {
    match command {
        Command::Simulate { circuit, state } => simulate(out, &circuit, &state),
        Command::GateCheck { name, gate } => {
            gate_check(out, name.or(gate).expect("clap requires one of them"))
        }
        Command::Sort { kind, n } => sort(out, kind, n),
        Command::Crystal {
            material,
            n_o,
            n_e,
            d,
            beta,
            material_db,
        } => crystal(
            out,
            CrystalArgs {
                material,
                n_o,
                n_e,
                d,
                beta,
                material_db,
            },
        ),
        Command::Resources { kind, n, circuit } => resources(out, kind, n, circuit.as_deref()),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT_ERROR };
        }
    };
    match execute(out, cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["psdp-sim"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gate_check_accepts_positional_or_flag() {
        assert_eq!(run_str(&["gate-check", "cnot"]).0, 0);
        assert_eq!(run_str(&["gate-check", "--gate", "z"]).0, 0);
        assert_eq!(run_str(&["gate-check", "toffoli"]).0, 2);
        assert_eq!(run_str(&["gate-check"]).0, 2);
    }

    #[test]
    fn resources_of_pos_tree() {
        let (code, out, _) = run_str(&["resources", "--kind", "pos", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("HWP\t2\n") && out.contains("PSDP\t2\n") && out.contains("PBS\t1\n"));
        assert_eq!(run_str(&["resources", "--kind", "pos", "--n", "3"]).0, 2);
    }

    #[test]
    fn crystal_defaults_to_design_point() {
        let (code, out, _) = run_str(&["crystal", "calcite"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("delta_deg\t26.329\n"));
        assert!(out.contains("beta_deg\t63.671\n"));
        assert!(out.contains("zero_opd\ttrue\n"));
        assert!(out.contains("opd_mm\t0.000000000000\n"));
    }

    #[test]
    fn crystal_rejects_missing_units_and_isotropy() {
        assert_eq!(run_str(&["crystal", "calcite", "--beta", "45"]).0, 2);
        let (code, out, _) = run_str(&["crystal", "--no", "1.5", "--ne", "1.5"]);
        assert_eq!(code, 2);
        assert!(out.contains("status\tdegenerate"));
        assert_eq!(run_str(&["crystal"]).0, 2);
        assert_eq!(run_str(&["crystal", "unobtainium"]).0, 2);
    }
}
