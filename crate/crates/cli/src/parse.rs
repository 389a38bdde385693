use std::path::Path;

use mahler_core::scalar::parse_rational;
use mahler_core::{Error, MahlerSystem, Rational, Result, TruncSeries};

pub fn load_system(path: &Path) -> Result<MahlerSystem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    MahlerSystem::from_json(&text)
}

/// Series file: `[[c0, c1, ...], ...]` or `{"series": [[...], ...]}`.
pub fn load_series(path: &Path) -> Result<Vec<TruncSeries>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let arr = match &value {
        serde_json::Value::Object(map) => map.get("series").cloned().ok_or_else(|| Error::Parse("missing key \"series\"".into()))?,
        v => v.clone(),
    };
    let raw: Vec<Vec<String>> = serde_json::from_value(arr).map_err(|e| Error::Parse(format!("series: {e}")))?;
    raw.iter()
        .map(|s| s.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>().map(TruncSeries::new))
        .collect()
}

pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text.trim())
}

pub fn rationals(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(rational).collect()
}

/// `a..b` (inclusive) or a comma-separated list.
pub fn index_list(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("expected a range a..b or a list a,b,c, got {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(index_list("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(index_list("1, 3").unwrap(), vec![1, 3]);
        assert!(index_list("5..2").is_err());
        assert_eq!(rationals("1,-1,1/2").unwrap().len(), 3);
    }
}
