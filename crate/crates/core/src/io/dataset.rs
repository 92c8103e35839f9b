//! Plain-text dataset format:
//!
//! ```text
//! cslam-dataset v1
//! K <k>
//! rows <n>
//! <3K features in %.16e> <label>
//! ```
//!
//! Labels are 0 (LOS), 1 (first-order NLOS) and 2 (higher-order NLOS).

use std::io::Write;
use std::path::Path;

use super::{create, finish};
use crate::error::{Error, Result};
use crate::estimation::LinkState;
use crate::lscn::Dataset;

pub const DATASET_HEADER: &str = "cslam-dataset v1";

pub fn write_dataset_to(w: &mut impl Write, data: &Dataset) -> Result<()> {
    writeln!(w, "{DATASET_HEADER}")?;
    writeln!(w, "K {}", data.k)?;
    writeln!(w, "rows {}", data.len())?;
    for (row, label) in data.features.iter().zip(&data.labels) {
        for x in row {
            write!(w, "{x:.16e} ")?;
        }
        writeln!(w, "{}", label.index())?;
    }
    Ok(())
}

pub fn write_dataset(path: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let mut w = create(path.as_ref())?;
    write_dataset_to(&mut w, data)?;
    finish(w)
}

fn keyed(line: Option<(usize, &str)>, key: &str, expected_line: usize) -> Result<usize> {
    let (n, text) = line.ok_or_else(|| Error::format(expected_line, format!("missing '{key}' line")))?;
    text.strip_prefix(key)
        .and_then(|v| v.strip_prefix(' '))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::format(n, format!("expected '{key} <integer>'")))
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim_end() == DATASET_HEADER => {}
        _ => return Err(Error::format(1, format!("expected header '{DATASET_HEADER}'"))),
    }
    let k = keyed(lines.next(), "K", 2)?;
    let rows = keyed(lines.next(), "rows", 3)?;
    if k == 0 {
        return Err(Error::format(2, "K must be at least 1"));
    }
    let mut features = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for r in 0..rows {
        let n = r + 4;
        let (_, line) = lines
            .next()
            .ok_or_else(|| Error::format(n, format!("file ends after {r} of {rows} rows")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 * k + 1 {
            return Err(Error::format(n, format!("expected {} fields, found {}", 3 * k + 1, fields.len())));
        }
        let row = fields[..3 * k]
            .iter()
            .map(|f| f.parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::format(n, "feature is not a finite number"))?;
        let label = fields[3 * k]
            .parse::<usize>()
            .ok()
            .and_then(LinkState::from_index)
            .ok_or_else(|| Error::format(n, "label must be 0, 1 or 2"))?;
        features.push(row);
        labels.push(label);
    }
    if let Some((n, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::format(n, format!("unexpected trailing content '{}'", l.trim())));
    }
    Dataset::new(k, features, labels)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_dataset(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(d: &Dataset) -> String {
        let mut buf = Vec::new();
        write_dataset_to(&mut buf, d).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_round_trip() {
        let d = Dataset::empty(4);
        let t = text(&d);
        assert_eq!(t.lines().count(), 3);
        assert_eq!(parse_dataset(&t).unwrap(), d);
    }

    #[test]
    fn bit_exact_round_trip() {
        let row = vec![1.0 / 3.0, -2.5e-9, std::f64::consts::PI, 1e300, -0.0, 5e-324];
        let d = Dataset::new(2, vec![row], vec![LinkState::HigherOrderNlos]).unwrap();
        let back = parse_dataset(&text(&d)).unwrap();
        for (a, b) in back.features[0].iter().zip(&d.features[0]) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.labels, d.labels);
    }

    #[test]
    fn truncated_file_names_line() {
        let d = Dataset::new(1, vec![vec![1.0, 2.0, 3.0]; 3], vec![LinkState::Los; 3]).unwrap();
        let t = text(&d);
        let cut: String = t.lines().take(5).map(|l| format!("{l}\n")).collect();
        match parse_dataset(&cut) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let bad = t.replacen(" 0\n", " 7\n", 1);
        assert!(matches!(parse_dataset(&bad), Err(Error::Format { line: 4, .. })));
        assert!(matches!(parse_dataset("nope"), Err(Error::Format { line: 1, .. })));
        let extra = format!("{t}1 2 3 0\n");
        assert!(matches!(parse_dataset(&extra), Err(Error::Format { line: 7, .. })));
    }
}
