/// Fixed six-decimal rendering used by every numeric CSV column.
pub(crate) fn fixed6(value: f64) -> String {
    let s = format!("{value:.6}");
    // "-0.000000" and "0.000000" must not differ between runs.
    if s.trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        "0.000000".to_string()
    } else {
        s
    }
}

pub(crate) fn fixed6_opt(value: Option<f64>) -> String {
    value.map(fixed6).unwrap_or_else(|| "NA".to_string())
}

/// Renders records as CSV with `\n` line endings.
pub(crate) fn csv_string<I, R>(records: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to memory"))
        .expect("CSV of UTF-8 fields is UTF-8")
}
