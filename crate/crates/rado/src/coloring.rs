//! Total colorings of an initial segment `[1..N]`.

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ColoringError {
    #[error("color {color} out of range for {r} colors")]
    ColorOutOfRange { color: usize, r: usize },
    #[error("point {0} outside the colored window")]
    PointOutOfWindow(i64),
    #[error("malformed coloring: {0}")]
    Malformed(String),
}

/// A total map from `[1..N]` to color indices `0..r-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    r: usize,
    colors: Vec<u8>, // colors[i] is the color of point i+1
}

impl Coloring {
    pub fn new(r: usize, colors: Vec<u8>) -> Result<Self, ColoringError> {
        if r < 1 || r > 256 {
            return Err(ColoringError::Malformed(format!("r = {r} not in 1..=256")));
        }
        if let Some(c) = colors.iter().find(|c| **c as usize >= r) {
            return Err(ColoringError::ColorOutOfRange {
                color: *c as usize,
                r,
            });
        }
        Ok(Self { r, colors })
    }

    /// All of `[1..n]` in a single color.
    pub fn constant(n: usize) -> Self {
        Self {
            r: 1,
            colors: vec![0; n],
        }
    }

    /// Color each point by its residue mod `q` (`q` colors).
    pub fn residue(n: usize, q: usize) -> Self {
        Self {
            r: q,
            colors: (1..=n).map(|i| (i % q) as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn color(&self, point: i64) -> Result<usize, ColoringError> {
        if point < 1 || point > self.colors.len() as i64 {
            return Err(ColoringError::PointOutOfWindow(point));
        }
        Ok(self.colors[(point - 1) as usize] as usize)
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Number of points of `color` among `[1..n]`.
    pub fn count_in_prefix(&self, color: usize, n: usize) -> usize {
        self.colors[..n.min(self.colors.len())]
            .iter()
            .filter(|c| **c as usize == color)
            .count()
    }

    /// Colors that actually occur.
    pub fn present_colors(&self) -> Vec<usize> {
        let mut seen = vec![false; self.r];
        for &c in &self.colors {
            seen[c as usize] = true;
        }
        (0..self.r).filter(|&c| seen[c]).collect()
    }

    /// Restrict to the multiples of `q` and rescale: the result colors
    /// point `i` with the original color of `q * i`.
    pub fn restrict_to_multiples(&self, q: usize) -> Self {
        let m = self.colors.len() / q;
        Self {
            r: self.r,
            colors: (1..=m).map(|i| self.colors[q * i - 1]).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ColoringWire {
    Explicit { r: usize, colors: Vec<u8> },
    Residue { rule: String, modulus: usize },
}

impl Coloring {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "r": self.r, "colors": self.colors })
    }

    /// Parse the coloring file format. The residue shorthand
    /// `{"rule": "residue", "modulus": q}` needs the window size `n`.
    pub fn from_json(value: &serde_json::Value, n: Option<usize>) -> Result<Self, ColoringError> {
        let wire: ColoringWire = serde_json::from_value(value.clone())
            .map_err(|e| ColoringError::Malformed(e.to_string()))?;
        match wire {
            ColoringWire::Explicit { r, colors } => Self::new(r, colors),
            ColoringWire::Residue { rule, modulus } => {
                if rule != "residue" {
                    return Err(ColoringError::Malformed(format!("unknown rule {rule:?}")));
                }
                if modulus < 1 {
                    return Err(ColoringError::Malformed("modulus must be >= 1".into()));
                }
                let n = n.ok_or_else(|| {
                    ColoringError::Malformed(
                        "residue shorthand needs an explicit window size".into(),
                    )
                })?;
                Ok(Self::residue(n, modulus))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_coloring() {
        let c = Coloring::residue(10, 3);
        assert_eq!(c.r(), 3);
        assert_eq!(c.color(3).unwrap(), 0);
        assert_eq!(c.color(4).unwrap(), 1);
        assert!(c.color(11).is_err());
        assert!(c.color(0).is_err());
    }

    #[test]
    fn restrict_to_multiples_rescales() {
        // parity coloring: odds 1, evens 0
        let c = Coloring::residue(10, 2);
        let even_part = c.restrict_to_multiples(2);
        assert_eq!(even_part.n(), 5);
        assert!(even_part.colors().iter().all(|&x| x == 0));
    }

    #[test]
    fn rejects_out_of_range_color() {
        assert!(Coloring::new(2, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn json_shorthand() {
        let v = serde_json::json!({"rule": "residue", "modulus": 2});
        let c = Coloring::from_json(&v, Some(6)).unwrap();
        assert_eq!(c.colors(), &[1, 0, 1, 0, 1, 0]);
        assert!(Coloring::from_json(&v, None).is_err());

        let v2 = serde_json::json!({"r": 2, "colors": [0, 1, 0]});
        let c2 = Coloring::from_json(&v2, None).unwrap();
        assert_eq!(c2, Coloring::new(2, vec![0, 1, 0]).unwrap());
    }
}
