//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! dim=1
//! halfwidth=2.5
//! cells=5
//! f=0 3 1 2 0
//! g=0 0 1 0 0
//! k1=3 l1=6 k2=1 l2=1
//! ```
//!
//! Several `key=value` tokens may share a line; tokens without `=` continue
//! the value of the preceding key, so long vectors may wrap.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{ConstraintSpec, Domain, GridFunction};
use crate::scalar::Scalar;

const KEYS: [&str; 9] = ["dim", "halfwidth", "cells", "f", "g", "k1", "l1", "k2", "l2"];

#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    pub domain: Domain<T>,
    pub f: Option<GridFunction<T>>,
    pub g: Option<GridFunction<T>>,
    pub c1: Option<ConstraintSpec<T>>,
    pub c2: Option<ConstraintSpec<T>>,
}

fn missing(key: &str) -> Error {
    Error::Parse {
        line: 0,
        msg: format!("missing `{key}`"),
    }
}

impl<T: Scalar> Instance<T> {
    pub fn f(&self) -> Result<&GridFunction<T>> {
        self.f.as_ref().ok_or_else(|| missing("f"))
    }

    pub fn g(&self) -> Result<&GridFunction<T>> {
        self.g.as_ref().ok_or_else(|| missing("g"))
    }

    pub fn c1(&self) -> Result<ConstraintSpec<T>> {
        self.c1.ok_or_else(|| missing("k1/l1"))
    }

    pub fn c2(&self) -> Result<ConstraintSpec<T>> {
        self.c2.ok_or_else(|| missing("k2/l2"))
    }

    pub fn parse(text: &str) -> Result<Self> {
        // key -> (line of first occurrence, tokens)
        let mut raw: BTreeMap<&str, (usize, Vec<&str>)> = BTreeMap::new();
        let mut current: Option<&str> = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("");
            for token in body.split_whitespace() {
                if let Some((key, value)) = token.split_once('=') {
                    let key = key.trim();
                    if !KEYS.contains(&key) {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unknown key `{key}`"),
                        });
                    }
                    if raw.contains_key(key) {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("duplicate key `{key}`"),
                        });
                    }
                    let tokens = if value.is_empty() { vec![] } else { vec![value] };
                    raw.insert(key, (line_no, tokens));
                    current = Some(key);
                } else {
                    let Some(key) = current else {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("value `{token}` before any key"),
                        });
                    };
                    raw.get_mut(key).unwrap().1.push(token);
                }
            }
        }

        let scalar = |key: &str| -> Result<Option<(usize, f64)>> {
            let Some((line, tokens)) = raw.get(key) else {
                return Ok(None);
            };
            match tokens.as_slice() {
                [one] => one.parse::<f64>().map(|v| Some((*line, v))).map_err(|_| Error::Parse {
                    line: *line,
                    msg: format!("`{key}` expects a number, got `{one}`"),
                }),
                _ => Err(Error::Parse {
                    line: *line,
                    msg: format!("`{key}` expects exactly one value"),
                }),
            }
        };
        let required = |key: &str| scalar(key)?.ok_or_else(|| missing(key));

        let (dim_line, dim) = required("dim")?;
        let (_, halfwidth) = required("halfwidth")?;
        let (cells_line, cells) = required("cells")?;
        if dim.fract() != 0.0 || cells.fract() != 0.0 || cells < 1.0 {
            return Err(Error::Parse {
                line: if dim.fract() != 0.0 { dim_line } else { cells_line },
                msg: "`dim` and `cells` must be positive integers".into(),
            });
        }
        let domain = Domain::new(dim as usize, T::from_f64(halfwidth).unwrap(), cells as usize)
            .map_err(|e| Error::Parse {
                line: dim_line,
                msg: e.to_string(),
            })?;

        let function = |key: &str| -> Result<Option<GridFunction<T>>> {
            let Some((line, tokens)) = raw.get(key) else {
                return Ok(None);
            };
            let values = tokens
                .iter()
                .map(|t| {
                    t.parse::<f64>()
                        .ok()
                        .and_then(T::from_f64)
                        .ok_or_else(|| Error::Parse {
                            line: *line,
                            msg: format!("`{key}`: `{t}` is not a number"),
                        })
                })
                .collect::<Result<Vec<T>>>()?;
            GridFunction::new(domain, values).map(Some).map_err(|e| Error::Parse {
                line: *line,
                msg: format!("`{key}`: {e}"),
            })
        };
        let constraint = |k: &str, l: &str| -> Result<Option<ConstraintSpec<T>>> {
            match (scalar(k)?, scalar(l)?) {
                (None, None) => Ok(None),
                (Some((line, cap)), Some((_, mass))) => {
                    ConstraintSpec::new(T::from_f64(cap).unwrap(), T::from_f64(mass).unwrap())
                        .map(Some)
                        .map_err(|e| Error::Parse {
                            line,
                            msg: e.to_string(),
                        })
                }
                (Some((line, _)), None) | (None, Some((line, _))) => Err(Error::Parse {
                    line,
                    msg: format!("`{k}` and `{l}` must be given together"),
                }),
            }
        };

        Ok(Self {
            domain,
            f: function("f")?,
            g: function("g")?,
            c1: constraint("k1", "l1")?,
            c2: constraint("k2", "l2")?,
        })
    }

    /// Canonical text form; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.domain;
        let _ = writeln!(out, "dim={}", d.dim());
        let _ = writeln!(out, "halfwidth={}", d.halfwidth());
        let _ = writeln!(out, "cells={}", d.cells_per_axis());
        for (key, u) in [("f", &self.f), ("g", &self.g)] {
            if let Some(u) = u {
                let values: Vec<String> = u.values().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{key}={}", values.join(" "));
            }
        }
        for (i, c) in [(1, &self.c1), (2, &self.c2)] {
            if let Some(c) = c {
                let _ = writeln!(out, "k{i}={} l{i}={}", c.cap, c.mass);
            }
        }
        out
    }
}

impl<T: Scalar> FromStr for Instance<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
