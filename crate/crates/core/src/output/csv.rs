//! Fixed-schema CSV: 26 columns, floats at full round-trip precision,
//! byte-stable across runs.

use crate::eigen::NORMALIZATION_CAP;
use crate::ep::RegimeKind;
use crate::output::OutputError;
use crate::sweep::SweepRecord;
use std::fmt::Write as _;

/// The pinned column set. `E`/`G_half` are the tracked eigenvalue
/// components, `absB12` the cross-overlap magnitude; `at_ep` is 0/1
/// and `regime` one of the regime labels or `undefined`.
pub const CSV_HEADER: &str = "a,E1,G1_half,E2,G2_half,r1,r2,one_minus_r1,one_minus_r2,\
abs_b11,abs_b12,abs_b21,abs_b22,theta11,theta12,theta21,theta22,\
absZ,reZ,imZ,absB12,ep_alignment,nl_mag1,nl_mag2,at_ep,regime";

/// Number of columns in the schema.
pub const CSV_COLUMNS: usize = 26;

/// Renders records as CSV text. Floats are written as `{:.16e}`
/// (17 significant digits), which round-trips every finite f64.
pub fn to_csv(records: &[SweepRecord]) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::EmptyInput);
    }
    let mut out = String::with_capacity(64 + records.len() * 640);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let floats = [
            r.a,
            r.e1,
            r.g1_half,
            r.e2,
            r.g2_half,
            r.r1,
            r.r2,
            r.one_minus_r1,
            r.one_minus_r2,
            r.abs_b11,
            r.abs_b12,
            r.abs_b21,
            r.abs_b22,
            r.theta11,
            r.theta12,
            r.theta21,
            r.theta22,
            r.abs_z,
            r.re_z,
            r.im_z,
            r.abs_cross_overlap,
            r.ep_alignment,
            r.nl_mag1,
            r.nl_mag2,
        ];
        for x in floats {
            write!(out, "{x:.16e},").expect("write to String");
        }
        write!(out, "{},", u8::from(r.at_ep)).expect("write to String");
        out.push_str(r.regime.map_or("undefined", |k| k.as_str()));
        out.push('\n');
    }
    Ok(out)
}

fn field_err(line: usize, column: &str, what: &str) -> OutputError {
    OutputError::Csv(format!("line {line}, column `{column}`: {what}"))
}

/// Parses CSV produced by [`to_csv`] back into records.
///
/// The normalization factors are not part of the schema; they are
/// reconstructed from the reciprocal identity `A = 1/r` (capped, and
/// pinned to the cap on flagged coalescence rows).
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>, OutputError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(OutputError::Csv(format!(
                "unexpected header: `{}`",
                header.chars().take(80).collect::<String>()
            )))
        }
        None => return Err(OutputError::Csv("empty document".to_string())),
    }
    let names: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_COLUMNS {
            return Err(OutputError::Csv(format!(
                "line {lineno}: expected {CSV_COLUMNS} fields, found {}",
                fields.len()
            )));
        }
        let mut f = [0.0f64; 24];
        for (i, slot) in f.iter_mut().enumerate() {
            *slot = fields[i]
                .parse()
                .map_err(|_| field_err(lineno, names[i], "not a float"))?;
        }
        let at_ep = match fields[24] {
            "0" => false,
            "1" => true,
            _ => return Err(field_err(lineno, "at_ep", "expected 0 or 1")),
        };
        let regime = match fields[25] {
            "undefined" => None,
            s => Some(
                RegimeKind::parse(s)
                    .ok_or_else(|| field_err(lineno, "regime", "unknown label"))?,
            ),
        };
        let a_norm = |r: f64| {
            if at_ep || r <= 0.0 {
                NORMALIZATION_CAP
            } else {
                (1.0 / r).min(NORMALIZATION_CAP)
            }
        };
        records.push(SweepRecord {
            a: f[0],
            e1: f[1],
            g1_half: f[2],
            e2: f[3],
            g2_half: f[4],
            r1: f[5],
            r2: f[6],
            a_norm1: a_norm(f[5]),
            a_norm2: a_norm(f[6]),
            one_minus_r1: f[7],
            one_minus_r2: f[8],
            abs_b11: f[9],
            abs_b12: f[10],
            abs_b21: f[11],
            abs_b22: f[12],
            theta11: f[13],
            theta12: f[14],
            theta21: f[15],
            theta22: f[16],
            abs_z: f[17],
            re_z: f[18],
            im_z: f[19],
            abs_cross_overlap: f[20],
            ep_alignment: f[21],
            nl_mag1: f[22],
            nl_mag2: f[23],
            at_ep,
            regime,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{preset, run_sweep};

    fn small_sweep() -> Vec<SweepRecord> {
        let mut s = preset("fig1l").unwrap();
        s.n_steps = 51; // grid step 0.02: hits both coalescences exactly
        run_sweep(&s)
    }

    #[test]
    fn header_is_pinned() {
        assert_eq!(CSV_HEADER.split(',').count(), CSV_COLUMNS);
        let text = to_csv(&small_sweep()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 52);
    }

    #[test]
    fn rows_round_trip_exactly() {
        let records = small_sweep();
        let text = to_csv(&records).unwrap();
        let back = parse_csv(&text).unwrap();
        // Byte-identical re-emission: every carried field survives.
        assert_eq!(to_csv(&back).unwrap(), text);
        // The normalization factors are reconstructed (they are not
        // columns); every carried field must come back bitwise.
        assert_eq!(back.len(), records.len());
        for (b, r) in back.iter().zip(&records) {
            let mut want = *r;
            want.a_norm1 = b.a_norm1;
            want.a_norm2 = b.a_norm2;
            assert_eq!(*b, want);
        }
        for b in &back {
            if !b.at_ep {
                assert!((b.r1 * b.a_norm1 - 1.0).abs() <= 1e-12);
                assert!((b.r2 * b.a_norm2 - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn coalescence_rows_use_the_sentinel_forms() {
        let records = small_sweep();
        let text = to_csv(&records).unwrap();
        let ep_row = text
            .lines()
            .find(|l| l.ends_with(",1,undefined"))
            .expect("an at_ep row");
        assert!(ep_row.starts_with("4.0000000000000002e-1,"));
        let normal_row = text
            .lines()
            .find(|l| l.ends_with("width_bifurcation"))
            .expect("a classified row");
        assert!(normal_row.ends_with(",0,width_bifurcation"));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(to_csv(&[]), Err(OutputError::EmptyInput));
    }

    #[test]
    fn parser_rejects_malformed_documents() {
        let records = small_sweep();
        let text = to_csv(&records).unwrap();

        let bad_header = text.replacen("a,E1", "x,E1", 1);
        assert!(matches!(
            parse_csv(&bad_header),
            Err(OutputError::Csv(ref m)) if m.contains("header")
        ));

        let mut lines: Vec<&str> = text.lines().collect();
        lines[3] = "1,2,3";
        let short = lines.join("\n");
        assert!(matches!(
            parse_csv(&short),
            Err(OutputError::Csv(ref m)) if m.contains("line 4")
        ));

        let bad_float = text.replacen("4.0000000000000002e-1", "forty", 1);
        let err = parse_csv(&bad_float).unwrap_err();
        assert!(err.to_string().contains("not a float"));

        let bad_regime = text.replacen(",0,width_bifurcation", ",0,sideways", 1);
        let err = parse_csv(&bad_regime).unwrap_err();
        assert!(err.to_string().contains("regime"));
    }
}
