use lda_shift::phase::linear_grid;

/// Parses `start:stop:step` (inclusive of `stop` within 1e-12 of a step) or a
/// comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad number `{s}` in grid `{spec}`"))
    };
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("grid `{spec}` must be start:stop:step"));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if step <= 0.0 {
            return Err(format!("grid `{spec}` needs a positive step"));
        }
        linear_grid(start, stop, step)
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(format!("grid `{spec}` is empty"));
    }
    Ok(values)
}
