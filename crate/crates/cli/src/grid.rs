//! Load grids given as `start:stop:step` or `a,b,c`.

fn number(token: &str) -> Result<f64, String> {
    let x: f64 = token
        .trim()
        .parse()
        .map_err(|_| format!("--g: `{}` is not a number", token.trim()))?;
    if !x.is_finite() || x < 0.0 {
        return Err(format!(
            "--g: load must be finite and non-negative, got `{}`",
            token.trim()
        ));
    }
    Ok(x)
}

/// Range points are `start + i * step`, so rounding does not accumulate; the
/// stop value is included when it lands on the grid.
pub fn parse(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("--g: empty load list".to_string());
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(number).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 {
                return Err("--g: step must be positive".to_string());
            }
            if stop < start {
                return Err(format!("--g: stop {stop} is below start {start}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(format!("--g: {count} load points is too many"));
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("--g: expected start:stop:step or a comma list, got `{text}`")),
    }
}
