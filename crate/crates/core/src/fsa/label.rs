use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Human-readable state label. Product states carry the tuple of their
/// component labels and observer states the set of member labels, so the
/// provenance of any state survives arbitrarily deep constructions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(Arc<LabelKind>);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LabelKind {
    Name(Arc<str>),
    Tuple(Vec<Label>),
    Cell(Vec<Label>),
}

impl Label {
    pub fn name(name: impl Into<Arc<str>>) -> Self {
        Label(Arc::new(LabelKind::Name(name.into())))
    }

    pub fn tuple(parts: Vec<Label>) -> Self {
        Label(Arc::new(LabelKind::Tuple(parts)))
    }

    pub fn cell(members: Vec<Label>) -> Self {
        Label(Arc::new(LabelKind::Cell(members)))
    }

    pub fn kind(&self) -> &LabelKind {
        &self.0
    }

    pub fn as_name(&self) -> Option<&str> {
        match &*self.0 {
            LabelKind::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, open: &str, xs: &[Label], close: &str) -> fmt::Result {
            f.write_str(open)?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                fmt::Display::fmt(x, f)?;
            }
            f.write_str(close)
        }
        match &*self.0 {
            LabelKind::Name(n) => f.write_str(n),
            LabelKind::Tuple(xs) => list(f, "(", xs, ")"),
            LabelKind::Cell(xs) => list(f, "{", xs, "}"),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::name(s)
    }
}
