//! Ansatz builders and the line-oriented ansatz file format.

use crate::error::{Error, Result};
use crate::pauli::PauliWord;
use crate::statevector::{Circuit, Gate};

/// Entangler layout for [`build_efficient_su2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entanglement {
    /// CX(q -> q+1) for q = 0..n-2.
    #[default]
    Linear,
    /// Linear chain plus CX(n-1 -> 0).
    Circular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficientSu2Options {
    pub reps: usize,
    pub entanglement: Entanglement,
    pub final_rotation_layer: bool,
}

impl Default for EfficientSu2Options {
    fn default() -> Self {
        EfficientSu2Options {
            reps: 3,
            entanglement: Entanglement::Linear,
            final_rotation_layer: true,
        }
    }
}

/// EfficientSU2 with linear entanglement and a final rotation layer:
/// `2·n·(reps+1)` parameters.
pub fn build_efficient_su2(n: usize, reps: usize) -> Result<Circuit> {
    build_efficient_su2_with(
        n,
        EfficientSu2Options {
            reps,
            ..Default::default()
        },
    )
}

pub fn build_efficient_su2_with(n: usize, opts: EfficientSu2Options) -> Result<Circuit> {
    if n == 0 || opts.reps == 0 {
        return Err(Error::InvalidArgument(format!(
            "EfficientSU2 needs n >= 1 and reps >= 1 (got n={n}, reps={})",
            opts.reps
        )));
    }
    let mut gates = Vec::new();
    let mut slot = 0;
    let mut rotation_layer = |gates: &mut Vec<Gate>| {
        for qubit in 0..n {
            gates.push(Gate::Ry { qubit, slot });
            slot += 1;
        }
        for qubit in 0..n {
            gates.push(Gate::Rz { qubit, slot });
            slot += 1;
        }
    };
    rotation_layer(&mut gates);
    for rep in 0..opts.reps {
        for q in 0..n.saturating_sub(1) {
            gates.push(Gate::Cx {
                control: q,
                target: q + 1,
            });
        }
        if opts.entanglement == Entanglement::Circular && n > 2 {
            gates.push(Gate::Cx {
                control: n - 1,
                target: 0,
            });
        }
        if opts.final_rotation_layer || rep + 1 < opts.reps {
            rotation_layer(&mut gates);
        }
    }
    Circuit::new(n, gates)
}

/// 2-qubit UCCSD: `exp(-i t0 IY/2)`, `exp(-i t1 YI/2)`, then the double
/// excitation `exp(-i t2 (XY + YX)/2)` as two commuting evolutions sharing slot 2.
pub fn build_uccsd_2q() -> Circuit {
    let evo = |w: &str, slot| Gate::PauliEvolution {
        word: w.parse().expect("static word"),
        slot,
    };
    Circuit::new(2, vec![evo("IY", 0), evo("YI", 1), evo("XY", 2), evo("YX", 2)]).expect("static circuit")
}

/// Parses an ansatz file:
///
/// ```text
/// qubits 2
/// h 0
/// cx 0 1
/// ry 1 0
/// evo XY 1
/// ```
///
/// Mnemonics are `ry`, `rz` (qubit, slot), `cx` (control, target), `h`, `x`,
/// `s`, `sdg` (qubit) and `evo` (word, slot). `#` comments and blank lines are
/// ignored.
pub fn parse_ansatz_file(text: &str) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        let int = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| err(format!("expected a non-negative integer, found '{s}'")))
        };
        let arity = |k: usize| -> Result<()> {
            if fields.len() == k + 1 {
                Ok(())
            } else {
                Err(err(format!("'{}' takes {k} operand(s)", fields[0])))
            }
        };
        let Some(n) = n_qubits else {
            if fields[0] != "qubits" {
                return Err(err("missing `qubits <n>` header".into()));
            }
            arity(1)?;
            let n = int(fields[1])?;
            if n == 0 {
                return Err(err("qubit count must be positive".into()));
            }
            n_qubits = Some(n);
            continue;
        };
        let qubit = |s: &str| -> Result<usize> {
            let q = int(s)?;
            if q >= n {
                return Err(err(format!("qubit {q} out of range for {n} qubits")));
            }
            Ok(q)
        };
        let gate = match fields[0] {
            "ry" | "rz" => {
                arity(2)?;
                let (q, slot) = (qubit(fields[1])?, int(fields[2])?);
                if fields[0] == "ry" {
                    Gate::Ry { qubit: q, slot }
                } else {
                    Gate::Rz { qubit: q, slot }
                }
            }
            "cx" => {
                arity(2)?;
                let (control, target) = (qubit(fields[1])?, qubit(fields[2])?);
                if control == target {
                    return Err(err("cx control and target must differ".into()));
                }
                Gate::Cx { control, target }
            }
            "h" | "x" | "s" | "sdg" => {
                arity(1)?;
                let q = qubit(fields[1])?;
                match fields[0] {
                    "h" => Gate::H { qubit: q },
                    "x" => Gate::X { qubit: q },
                    "s" => Gate::S { qubit: q },
                    _ => Gate::Sdg { qubit: q },
                }
            }
            "evo" => {
                arity(2)?;
                let word: PauliWord = fields[1].parse().map_err(|e: Error| err(e.to_string()))?;
                if word.n_qubits() != n {
                    return Err(err(format!("word '{}' does not have {n} qubits", fields[1])));
                }
                Gate::PauliEvolution {
                    word,
                    slot: int(fields[2])?,
                }
            }
            "qubits" => return Err(err("duplicate `qubits` header".into())),
            other => return Err(err(format!("unknown mnemonic '{other}'"))),
        };
        gates.push(gate);
    }
    let n = n_qubits.ok_or(Error::Parse {
        line: 1,
        message: "missing `qubits <n>` header".into(),
    })?;
    Circuit::new(n, gates)
}

/// Writes a circuit in the ansatz file format.
pub fn circuit_to_text(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits());
    for g in circuit.gates() {
        let line = match g {
            Gate::X { qubit } => format!("x {qubit}"),
            Gate::H { qubit } => format!("h {qubit}"),
            Gate::S { qubit } => format!("s {qubit}"),
            Gate::Sdg { qubit } => format!("sdg {qubit}"),
            Gate::Ry { qubit, slot } => format!("ry {qubit} {slot}"),
            Gate::Rz { qubit, slot } => format!("rz {qubit} {slot}"),
            Gate::Cx { control, target } => format!("cx {control} {target}"),
            Gate::PauliEvolution { word, slot } => format!("evo {word} {slot}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
