//! Argument parsers.

/// Comma-separated exponents with run-length shorthand: `1^7,3,5,6`.
pub fn exponents(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(format!("empty item in {s:?}"));
        }
        let (value, count) = match item.split_once('^') {
            Some((v, m)) => (v.trim(), m.trim().parse::<usize>().map_err(|e| format!("bad repeat in {item:?}: {e}"))?),
            None => (item, 1),
        };
        let value = value.parse::<i64>().map_err(|e| format!("bad exponent {value:?}: {e}"))?;
        out.extend(std::iter::repeat(value).take(count));
    }
    Ok(out)
}

/// Inclusive range `A..B` (also `A..=B` and `A-B`), or a single value.
pub fn range(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    let (a, b) = if let Some((a, b)) = s.split_once("..") {
        (a, b.trim_start_matches('='))
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    let a = a.trim().parse::<u64>().map_err(|e| format!("bad range start in {s:?}: {e}"))?;
    let b = b.trim().parse::<u64>().map_err(|e| format!("bad range end in {s:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}
