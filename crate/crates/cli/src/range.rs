use std::str::FromStr;

/// `start:end:count` with inclusive endpoints, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn is_single(&self) -> bool {
        self.count == 1 && self.start == self.end
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => {
                let v = parse_f64(v)?;
                Ok(Range { start: v, end: v, count: 1 })
            }
            [a, b, n] => {
                let count: usize = n.trim().parse().map_err(|_| format!("'{n}' is not a sample count"))?;
                Ok(Range { start: parse_f64(a)?, end: parse_f64(b)?, count })
            }
            _ => Err(format!("'{s}' is not of the form start:end:count")),
        }
    }
}

/// Inclusive integer range `a:b`, or a single integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntRange {
    pub start: u32,
    pub end: u32,
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("'{t}' is not a non-negative integer"));
        match s.split_once(':') {
            None => {
                let v = int(s)?;
                Ok(IntRange { start: v, end: v })
            }
            Some((a, b)) => {
                let (start, end) = (int(a)?, int(b)?);
                if start > end {
                    return Err(format!("empty integer range '{s}'"));
                }
                Ok(IntRange { start, end })
            }
        }
    }
}

/// Parses a point written as `x,y`.
pub fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("'{s}' is not of the form x,y"))?;
    Ok((parse_f64(a)?, parse_f64(b)?))
}
