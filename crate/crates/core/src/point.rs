use alloc::string::String;
use core::fmt;

use crate::Error;

/// External identifier of a point: a nonempty token without whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(String);

impl Point {
    pub fn new(id: impl Into<String>) -> Result<Self, Error> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidIdentifier(id));
        }
        Ok(Point(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::borrow::Borrow<str> for Point {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Point {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for Point {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Point::new(value)
    }
}

impl TryFrom<String> for Point {
    type Error = Error;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Point::new(value)
    }
}

/// Dense index of a point inside one semitopology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_whitespace() {
        assert!(Point::new("").is_err());
        assert!(Point::new("a b").is_err());
        assert!(Point::new("a\t").is_err());
        assert_eq!(Point::new("p0").unwrap().as_str(), "p0");
    }
}
