//! Plain-text parameter checkpoints.
//!
//! ```text
//! irregcast-params v1
//! <name> <rows> <cols>
//! <v_0> <v_1> ... <v_{rows*cols-1}>
//! ...
//! ```
//!
//! One header line, then two lines per parameter in store order. Values are
//! row-major and written with Rust's shortest round-trip float formatting, so
//! reloading reproduces every bit.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{ParamStore, Tensor2};
use crate::error::{Error, Result};

const MAGIC: &str = "irregcast-params v1";

pub fn write_params<W: Write>(store: &ParamStore, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    for id in store.ids() {
        let v = store.value(id);
        writeln!(out, "{} {} {}", store.name(id), v.rows(), v.cols())?;
        let line: Vec<String> = v.data().iter().map(|x| format!("{x}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Loads values into an existing store. Names and shapes must match the
/// store's parameters in order.
pub fn read_params<R: Read>(store: &mut ParamStore, input: R) -> Result<()> {
    let mut lines = BufReader::new(input).lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Checkpoint(format!("unexpected end of file, expected {what}")))?
            .map_err(|e| Error::Checkpoint(e.to_string()))
    };
    if next("header")?.trim() != MAGIC {
        return Err(Error::Checkpoint("missing header".into()));
    }
    let ids: Vec<_> = store.ids().collect();
    for id in ids {
        let head = next("parameter header")?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let [name, rows, cols] = parts[..] else {
            return Err(Error::Checkpoint(format!("bad parameter header {head:?}")));
        };
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Checkpoint(format!("bad dimension {s:?}")))
        };
        let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);
        if name != store.name(id) || (rows, cols) != store.value(id).shape() {
            return Err(Error::Checkpoint(format!(
                "expected {} {:?}, found {name} {:?}",
                store.name(id),
                store.value(id).shape(),
                (rows, cols)
            )));
        }
        let body = next("values")?;
        let values = body
            .split_whitespace()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Checkpoint(format!("bad value {s:?} in {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != rows * cols {
            return Err(Error::Checkpoint(format!("{name}: wrong value count")));
        }
        *store.value_mut(id) = Tensor2::new(rows, cols, values);
    }
    Ok(())
}

pub fn save_params(store: &ParamStore, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_params(store, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn load_params(store: &mut ParamStore, path: &Path) -> Result<()> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_params(store, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = Rng::new(5);
        let mut a = ParamStore::new();
        a.add_glorot("l1.w", 3, 4, &mut rng);
        a.add("l1.b", Tensor2::new(1, 2, vec![1e-300, -0.1]));
        let mut buf = Vec::new();
        write_params(&a, &mut buf).unwrap();

        let mut b = ParamStore::new();
        b.add("l1.w", Tensor2::zeros(3, 4));
        b.add("l1.b", Tensor2::zeros(1, 2));
        read_params(&mut b, buf.as_slice()).unwrap();
        assert_eq!(a.snapshot(), b.snapshot());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut a = ParamStore::new();
        a.add("w", Tensor2::zeros(2, 2));
        let mut buf = Vec::new();
        write_params(&a, &mut buf).unwrap();
        let mut b = ParamStore::new();
        b.add("w", Tensor2::zeros(2, 3));
        assert!(matches!(read_params(&mut b, buf.as_slice()), Err(Error::Checkpoint(_))));
    }
}
