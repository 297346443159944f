//! Plain-text exchange formats. Every number crosses the boundary as a
//! decimal string.

use crate::fit1d::SampleSet1D;
use crate::hpnum::{to_decimal, BigReal, Context};
use crate::linalg::Matrix;
use crate::vandermonde::NodeSet;
use crate::{Error, Result};

/// Rows of decimal fields, skipping blank lines and one optional header
/// (a first line whose first field does not parse as a number).
pub fn read_rows(ctx: &Context, text: &str, width: usize) -> Result<Vec<Vec<BigReal>>> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if line == first_content_line(text) && ctx.parse(fields[0]).is_err() {
            continue;
        }
        if fields.len() != width {
            return Err(Error::Csv { line, message: format!("expected {width} fields, found {}", fields.len()) });
        }
        let row = fields
            .iter()
            .map(|f| ctx.parse(f).map_err(|_| Error::Csv { line, message: format!("{f:?} is not a decimal number") }))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn first_content_line(text: &str) -> usize {
    text.lines().position(|l| !l.trim().is_empty()).map_or(0, |i| i + 1)
}

/// `x,f` samples; nodes must be distinct.
pub fn read_samples(ctx: &Context, text: &str) -> Result<SampleSet1D> {
    let rows = read_rows(ctx, text, 2)?;
    let (xs, fs): (Vec<_>, Vec<_>) = rows.into_iter().map(|mut r| (r.remove(0), r.remove(0))).unzip();
    SampleSet1D::new(NodeSet::new(xs)?, fs)
}

/// Points and values read from `x,y,f` rows.
pub type Samples2D = (Vec<(BigReal, BigReal)>, Vec<BigReal>);

/// `x,y,f` samples.
pub fn read_samples_2d(ctx: &Context, text: &str) -> Result<Samples2D> {
    let rows = read_rows(ctx, text, 3)?;
    Ok(rows
        .into_iter()
        .map(|mut r| {
            let f = r.pop().expect("three fields");
            let y = r.pop().expect("three fields");
            let x = r.pop().expect("three fields");
            ((x, y), f)
        })
        .unzip())
}

/// Row-major CSV of full-precision decimal strings, no header.
pub fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(to_decimal).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// CSV with a header line and one row per index of the equally long columns.
pub fn columns_to_csv(headers: &[&str], columns: &[&[BigReal]]) -> String {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = headers.join(",");
    out.push('\n');
    for i in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| to_decimal(&c[i])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_with_and_without_header() {
        let ctx = Context::new(128).unwrap();
        let a = read_samples(&ctx, "x,f\n0,1\n0.5,2\n\n1,3e0\n").unwrap();
        let b = read_samples(&ctx, "0,1\n0.5,2\n1,3\n").unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.nodes().as_slice(), b.nodes().as_slice());
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn malformed_line_is_reported() {
        let ctx = Context::new(64).unwrap();
        match read_samples(&ctx, "x,f\n0,1\n0.5,abc\n") {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match read_samples(&ctx, "0,1\n1\n") {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        // A text header is only allowed on the first line.
        assert!(matches!(read_samples(&ctx, "0,1\nx,f\n"), Err(Error::Csv { line: 2, .. })));
        assert!(read_samples(&ctx, "0,1\n0,2\n").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let ctx = Context::new(300).unwrap();
        let m =
            Matrix::from_rows(vec![vec![ctx.ratio(1, 3), ctx.int(-2)], vec![ctx.pi(), ctx.parse("1e-900").unwrap()]])
                .unwrap();
        let text = matrix_to_csv(&m);
        let back = read_rows(&ctx, &text, 2).unwrap();
        for (i, row) in back.iter().enumerate() {
            assert_eq!(row, m.row(i));
        }
    }

    #[test]
    fn columns_layout() {
        let ctx = Context::new(64).unwrap();
        let xs = [ctx.int(1), ctx.int(2)];
        let ys = [ctx.ratio(1, 2), ctx.int(-3)];
        assert_eq!(columns_to_csv(&["x", "y"], &[&xs, &ys]), "x,y\n1,5e-1\n2,-3\n");
    }

    #[test]
    fn two_dimensional_samples() {
        let ctx = Context::new(64).unwrap();
        let (pts, f) = read_samples_2d(&ctx, "x,y,f\n0.25,-0.5,1\n").unwrap();
        assert_eq!(pts[0], (ctx.ratio(1, 4), ctx.ratio(-1, 2)));
        assert_eq!(f[0], 1);
    }
}
