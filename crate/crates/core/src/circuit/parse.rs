//! Line-oriented text formats. `#` starts a comment; blank lines are ignored.
//!
//! Circuit:
//! ```text
//! k 2
//! qubits 3
//! H 0
//! RX q1 3
//! RXX 0 2 1
//! ```
//! X-program: `k <int>`, `cols <int>`, then one bit-string per row with an
//! optional `*mult` suffix.

use super::{Circuit, Gate, XProgram};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("line {line}: {msg}"))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn int<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} '{tok}'")))
}

fn qubit(line: usize, tok: &str) -> Result<usize> {
    let t = tok.strip_prefix(['q', 'Q']).unwrap_or(tok);
    int(line, t, "qubit index")
}

fn header(
    line: usize,
    toks: &[&str],
    name: &str,
    slot: &mut Option<usize>,
) -> Result<()> {
    if toks.len() != 2 {
        return Err(err(line, format!("expected '{name} <int>'")));
    }
    if slot.is_some() {
        return Err(err(line, format!("duplicate '{name}' header")));
    }
    *slot = Some(int(line, toks[1], name)?);
    Ok(())
}

fn resolve_k(header: Option<usize>, given: Option<u32>) -> Result<u32> {
    let header = header
        .map(|k| u32::try_from(k).map_err(|_| Error::Input("k too large".into())))
        .transpose()?;
    match (header, given) {
        (Some(h), Some(g)) if h != g => Err(Error::Input(format!(
            "file declares k = {h} but k = {g} was requested"
        ))),
        (Some(h), _) => Ok(h),
        (None, Some(g)) => Ok(g),
        (None, None) => Err(Error::Input("missing 'k' header".into())),
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with_k(text, None)
}

/// As [`parse_circuit`], with `k` supplying the grid index when the file has
/// no `k` header. A header that disagrees with `k` is an input error.
pub fn parse_circuit_with_k(text: &str, k_default: Option<u32>) -> Result<Circuit> {
    let mut k = None;
    let mut n = None;
    let mut gates = Vec::new();
    for (line, toks) in lines(text) {
        let name = toks[0].to_ascii_lowercase();
        let arity = |want: usize| {
            if toks.len() == want + 1 {
                Ok(())
            } else {
                Err(err(line, format!("{} takes {want} arguments", toks[0])))
            }
        };
        match name.as_str() {
            "k" => header(line, &toks, "k", &mut k)?,
            "qubits" => header(line, &toks, "qubits", &mut n)?,
            "h" => {
                arity(1)?;
                gates.push(Gate::H(qubit(line, toks[1])?));
            }
            "rx" => {
                arity(2)?;
                gates.push(Gate::Rx(qubit(line, toks[1])?, int(line, toks[2], "multiplier")?));
            }
            "rxx" => {
                arity(3)?;
                gates.push(Gate::Rxx(
                    qubit(line, toks[1])?,
                    qubit(line, toks[2])?,
                    int(line, toks[3], "multiplier")?,
                ));
            }
            _ => return Err(err(line, format!("unknown instruction '{}'", toks[0]))),
        }
    }
    let k = resolve_k(k, k_default)?;
    let n = n.ok_or_else(|| Error::Input("missing 'qubits' header".into()))?;
    Circuit::new(k, n, gates)
}

pub fn parse_xprogram(text: &str) -> Result<XProgram> {
    parse_xprogram_with_k(text, None)
}

/// X-program counterpart of [`parse_circuit_with_k`].
pub fn parse_xprogram_with_k(text: &str, k_default: Option<u32>) -> Result<XProgram> {
    let mut k = None;
    let mut cols = None;
    let mut rows: Vec<(usize, Vec<bool>, u64)> = Vec::new();
    for (line, toks) in lines(text) {
        match toks[0] {
            "k" => header(line, &toks, "k", &mut k)?,
            "cols" => header(line, &toks, "cols", &mut cols)?,
            _ => {
                if toks.len() != 1 {
                    return Err(err(line, "expected a single bit-string row"));
                }
                let (bits, mult) = match toks[0].split_once('*') {
                    Some((b, m)) => (b, int(line, m, "multiplicity")?),
                    None => (toks[0], 1),
                };
                let bits = bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(err(line, format!("invalid bit '{c}'"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push((line, bits, mult));
            }
        }
    }
    let k = resolve_k(k, k_default)?;
    let cols = cols.ok_or_else(|| Error::Input("missing 'cols' header".into()))?;
    let mut xp = XProgram::new(k, cols)?;
    for (line, bits, mult) in rows {
        xp.push(bits, mult).map_err(|e| err(line, e))?;
    }
    Ok(xp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_round() {
        let c = parse_circuit("k 2\nqubits 3 # three\n\nH 0\nrx q1 3\nRXX 0 2 1\n").unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.gates, vec![Gate::H(0), Gate::Rx(1, 3), Gate::Rxx(0, 2, 1)]);
    }

    #[test]
    fn circuit_errors_carry_line_numbers() {
        let e = parse_circuit("k 1\nqubits 1\nCNOT 0 1\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(parse_circuit("k 1\nqubits 1\nH 1\n").is_err());
        assert!(parse_circuit("qubits 1\n").is_err());
        assert!(parse_circuit("k 1\nqubits 2\nRXX 1 1 1\n").is_err());
    }

    #[test]
    fn xprogram_rows_and_phase() {
        let xp = parse_xprogram("k 2\ncols 3\n110*3\n000*5\n001\n").unwrap();
        assert_eq!(xp.rows.len(), 2);
        assert_eq!(xp.rows[0].mult, 3);
        assert_eq!(xp.phase, 5);
        assert!(parse_xprogram("k 2\ncols 3\n11\n").is_err());
        assert!(parse_xprogram("k 2\ncols 2\n1x\n").is_err());
    }

    #[test]
    fn grid_index_from_caller() {
        let c = parse_circuit_with_k("qubits 1\nH 0\n", Some(3)).unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(parse_circuit_with_k("k 2\nqubits 1\n", Some(2)).unwrap().k, 2);
        assert!(parse_circuit_with_k("k 2\nqubits 1\n", Some(3)).is_err());
        assert!(parse_xprogram_with_k("cols 1\n1\n", None).is_err());
        assert_eq!(parse_xprogram_with_k("cols 1\n1\n", Some(1)).unwrap().k, 1);
    }
}
