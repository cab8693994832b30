//! Scalar values, array values and the literal syntax shared by source
//! programs and rendered graphs.

use std::fmt;

use serde::Serialize;

/// Element type of an item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseType {
    Int,
    Boolean,
    Char,
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseType::Int => "int",
            BaseType::Boolean => "boolean",
            BaseType::Char => "char",
        })
    }
}

/// Inclusive integer bounds `[lo:hi]` of an array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extent {
    pub lo: i64,
    pub hi: i64,
}

impl Extent {
    pub const SCALAR: Extent = Extent { lo: 0, hi: 0 };

    pub fn new(lo: i64, hi: i64) -> Self {
        debug_assert!(lo <= hi);
        Extent { lo, hi }
    }

    /// Extent `[0:len-1]`.
    pub fn of_len(len: usize) -> Self {
        assert!(len > 0, "extent must hold at least one element");
        Extent { lo: 0, hi: len as i64 - 1 }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Offset of declared index `index`, if it lies inside the extent.
    pub fn offset(&self, index: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&index).then(|| (index - self.lo) as usize)
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(i64),
    Bool(bool),
    Char(char),
}

impl Scalar {
    pub fn ty(&self) -> BaseType {
        match self {
            Scalar::Int(_) => BaseType::Int,
            Scalar::Bool(_) => BaseType::Boolean,
            Scalar::Char(_) => BaseType::Char,
        }
    }

    /// Numeric view used by comparisons; chars compare by code point.
    pub fn ordinal(&self) -> Option<i64> {
        match *self {
            Scalar::Int(v) => Some(v),
            Scalar::Char(c) => Some(c as i64),
            Scalar::Bool(_) => None,
        }
    }

    /// The value written to a channel log when printed as text.
    pub fn to_output(&self) -> String {
        match self {
            Scalar::Int(v) => v.to_string(),
            Scalar::Bool(b) => b.to_string(),
            Scalar::Char(c) => c.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match *self {
            Scalar::Int(v) => v.into(),
            Scalar::Bool(b) => b.into(),
            Scalar::Char(c) => c.to_string().into(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Char(c) => write!(f, "'{}'", escape_char(c, '\'')),
        }
    }
}

/// A literal carried by a task binding: a scalar, or a whole array such as a
/// string constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Scalar(Scalar),
    Array(Vec<Scalar>),
}

impl Value {
    /// Char array with the terminating 0 appended.
    pub fn string(text: &str) -> Value {
        let mut chars: Vec<Scalar> = text.chars().map(Scalar::Char).collect();
        chars.push(Scalar::Char('\0'));
        Value::Array(chars)
    }

    pub fn elements(&self) -> &[Scalar] {
        match self {
            Value::Scalar(s) => std::slice::from_ref(s),
            Value::Array(v) => v,
        }
    }
}

impl From<Scalar> for Value {
    fn from(s: Scalar) -> Self {
        Value::Scalar(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Array(elems) => {
                // Terminated char arrays print as string literals.
                let is_string = matches!(elems.last(), Some(Scalar::Char('\0')))
                    && elems.iter().all(|e| matches!(e, Scalar::Char(_)));
                if is_string {
                    f.write_str("\"")?;
                    for e in &elems[..elems.len() - 1] {
                        if let Scalar::Char(c) = e {
                            f.write_str(&escape_char(*c, '"'))?;
                        }
                    }
                    f.write_str("\"")
                } else {
                    f.write_str("{")?;
                    for (i, e) in elems.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{e}")?;
                    }
                    f.write_str("}")
                }
            }
        }
    }
}

pub(crate) fn escape_char(c: char, quote: char) -> String {
    match c {
        '\0' => "\\0".into(),
        '\n' => "\\n".into(),
        '\t' => "\\t".into(),
        '\\' => "\\\\".into(),
        c if c == quote => format!("\\{c}"),
        c => c.to_string(),
    }
}
