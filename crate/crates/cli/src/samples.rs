//! SampleCsv: one measurement per row, `theta_i,phi_i,theta_r,phi_r,value`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::{Read, Write};

use brdf_sampler_core::measurement::{MeasurementSet, Provenance};
use brdf_sampler_core::sampling::MeasurementConfiguration;
use brdf_sampler_core::Direction;

use crate::CliError;

pub const HEADER: [&str; 5] = ["theta_i", "phi_i", "theta_r", "phi_r", "value"];

/// Shortest decimal text that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Writes `set` in pair order.
pub fn write_samples<W: Write>(set: &MeasurementSet, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for (wi, wr, v) in set.samples() {
        out.write_record([wi.theta(), wi.phi(), wr.theta(), wr.phi(), v].map(format_float))?;
    }
    out.flush()?;
    Ok(())
}

/// Parses SampleCsv text. Rows are grouped into incoming directions by
/// `(theta_i, phi_i)` in order of first appearance. `source` names the input
/// in error messages.
pub fn read_samples<R: Read>(r: R, source: &str) -> Result<MeasurementSet, CliError> {
    let bad = |line: u64, message: String| CliError::Samples {
        file: source.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(HEADER) => {}
        Some(Ok(h)) => {
            return Err(bad(
                1,
                format!(
                    "expected header `{}`, found `{}`",
                    HEADER.join(","),
                    h.iter().collect::<Vec<_>>().join(",")
                ),
            ))
        }
        Some(Err(e)) => return Err(bad(1, e.to_string())),
        None => return Err(bad(1, "empty file".into())),
    }

    let mut pairs = Vec::new();
    let mut values = Vec::new();
    let mut seen: HashMap<([u64; 2], [u64; 2]), u64> = HashMap::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            bad(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(bad(
                line,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let mut row = [0.0; 5];
        for (k, (field, name)) in record.iter().zip(HEADER).enumerate() {
            let x: f64 = field
                .parse()
                .map_err(|_| bad(line, format!("`{name}` = `{field}` is not a number")))?;
            if !x.is_finite() {
                return Err(bad(line, format!("`{name}` = `{field}` is not finite")));
            }
            row[k] = x;
        }
        for (k, name) in [(0, "theta_i"), (2, "theta_r")] {
            if !(0.0..=FRAC_PI_2).contains(&row[k]) {
                return Err(bad(
                    line,
                    format!("`{name}` = {} is outside [0, π/2]", row[k]),
                ));
            }
        }
        for (k, name) in [(1, "phi_i"), (3, "phi_r")] {
            if !(0.0..TAU).contains(&row[k]) {
                return Err(bad(
                    line,
                    format!("`{name}` = {} is outside [0, 2π)", row[k]),
                ));
            }
        }
        let wi = Direction::new(row[0], row[1]).map_err(|e| bad(line, e.to_string()))?;
        let wr = Direction::new(row[2], row[3]).map_err(|e| bad(line, e.to_string()))?;
        if let Some(first) = seen.insert((wi.key(), wr.key()), line) {
            return Err(bad(line, format!("duplicate of the pair on line {first}")));
        }
        pairs.push((wi, wr));
        values.push(row[4]);
    }
    if pairs.is_empty() {
        return Err(bad(2, "no measurement rows".into()));
    }

    // `from_pairs` groups by first appearance; values follow the regrouped order.
    let index: HashMap<([u64; 2], [u64; 2]), usize> = pairs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| ((a.key(), b.key()), k))
        .collect();
    let configuration = MeasurementConfiguration::from_pairs(pairs.iter().copied())
        .map_err(|e| bad(0, e.to_string()))?;
    let values = configuration
        .pairs()
        .map(|(a, b)| values[index[&(a.key(), b.key())]])
        .collect();
    MeasurementSet::new(configuration, values, Provenance::ingested())
        .map_err(|e| bad(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<MeasurementSet, CliError> {
        read_samples(text.as_bytes(), "test.csv")
    }

    fn line_of(err: CliError) -> u64 {
        match err {
            CliError::Samples { line, .. } => line,
            other => panic!("{other}"),
        }
    }

    #[test]
    fn float_text_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.283185307179585, 0.0, 2.5e17, -4.2] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn groups_by_first_appearance() {
        let text = "theta_i,phi_i,theta_r,phi_r,value\n\
                    0.5,1,0.1,0,1\n\
                    0.2,0,0.1,0,2\n\
                    0.5,1,0.3,0,3\n";
        let m = parse(text).unwrap();
        let c = m.configuration();
        assert_eq!(c.p_refl(), vec![2, 1]);
        assert_eq!(c.incoming()[0].theta(), 0.5);
        assert_eq!(m.values(), &[1.0, 3.0, 2.0]);
        assert_eq!(m.provenance, Provenance::ingested());
    }

    #[test]
    fn rejects_bad_input_with_line_numbers() {
        let h = "theta_i,phi_i,theta_r,phi_r,value\n";
        assert_eq!(
            line_of(parse(&format!("{h}0.1,0,0.1,0,1\n2.0,0,0.1,0,1\n")).unwrap_err()),
            3
        );
        assert_eq!(
            line_of(parse(&format!("{h}0.1,0,0.1,0,1\n0.1,0,0.1,0,2\n")).unwrap_err()),
            3
        );
        assert_eq!(
            line_of(parse(&format!("{h}0.1,x,0.1,0,1\n")).unwrap_err()),
            2
        );
        assert_eq!(line_of(parse(&format!("{h}0.1,0,0.1,0\n")).unwrap_err()), 2);
        assert_eq!(
            line_of(parse(&format!("{h}0.1,7,0.1,0,1\n")).unwrap_err()),
            2
        );
        assert_eq!(
            line_of(parse(&format!("{h}0.1,0,0.1,0,NaN\n")).unwrap_err()),
            2
        );
        assert_eq!(line_of(parse("a,b,c,d,e\n").unwrap_err()), 1);
        assert!(parse(h).is_err());
    }
}
