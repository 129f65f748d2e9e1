use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ids::Label;
use crate::report::ValidationReport;
use crate::susy::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Super,
    Classical,
}

/// One moduli factor `C(g, I_NS, I_R)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub genus: u32,
    pub ns: BTreeSet<Label>,
    pub r: BTreeSet<Label>,
}

impl Factor {
    pub fn new<I, J, S, T>(genus: u32, ns: I, r: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<Label>,
        T: Into<Label>,
    {
        Self {
            genus,
            ns: ns.into_iter().map(Into::into).collect(),
            r: r.into_iter().map(Into::into).collect(),
        }
    }

    pub fn labels(&self, c: Color) -> &BTreeSet<Label> {
        match c {
            Color::Ns => &self.ns,
            Color::R => &self.r,
        }
    }

    pub fn labels_mut(&mut self, c: Color) -> &mut BTreeSet<Label> {
        match c {
            Color::Ns => &mut self.ns,
            Color::R => &mut self.r,
        }
    }

    pub fn color_of(&self, l: &Label) -> Option<Color> {
        Color::ALL.into_iter().find(|&c| self.labels(c).contains(l))
    }

    pub fn all_labels(&self) -> impl Iterator<Item = &Label> {
        self.ns.iter().chain(&self.r)
    }

    pub fn label_count(&self) -> usize {
        self.ns.len() + self.r.len()
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.label_count() as i64 > 0
    }

    /// Colors erased and label sets merged.
    pub fn classical(&self) -> Factor {
        Factor {
            genus: self.genus,
            ns: self.all_labels().cloned().collect(),
            r: BTreeSet::new(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<Label>| s.iter().map(Label::as_str).collect::<Vec<_>>().join(",");
        write!(f, "M({}; {{{}}}; {{{}}})", self.genus, join(&self.ns), join(&self.r))
    }
}

/// A product of moduli factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuliSignature {
    pub factors: Vec<Factor>,
    pub mode: Mode,
}

impl ModuliSignature {
    pub fn new(factors: Vec<Factor>, mode: Mode) -> Self {
        Self { factors, mode }
    }

    pub fn sorted(mut self) -> Self {
        self.factors.sort();
        self
    }

    /// Index of the factor carrying a label.
    pub fn factor_of(&self, l: &Label) -> Option<usize> {
        self.factors
            .iter()
            .position(|f| f.ns.contains(l) || f.r.contains(l))
    }

    pub fn color_of(&self, l: &Label) -> Option<Color> {
        self.factors.iter().find_map(|f| f.color_of(l))
    }

    pub fn all_labels(&self) -> impl Iterator<Item = &Label> {
        self.factors.iter().flat_map(Factor::all_labels)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let mut seen = BTreeSet::new();
        for (i, f) in self.factors.iter().enumerate() {
            for l in f.all_labels() {
                if !seen.insert(l) {
                    report.push("label repeated", format!("{l} in factor {i}"));
                }
            }
            if !f.is_stable() {
                report.push("unstable factor", f.to_string());
            }
            match self.mode {
                Mode::Super if f.r.len() % 2 != 0 => {
                    report.push("odd Ramond labels", f.to_string());
                }
                Mode::Classical if !f.r.is_empty() => {
                    report.push("Ramond labels in classical mode", f.to_string());
                }
                _ => {}
            }
        }
        report
    }

    pub fn classical(&self) -> ModuliSignature {
        ModuliSignature::new(self.factors.iter().map(Factor::classical).collect(), Mode::Classical).sorted()
    }
}

impl fmt::Display for ModuliSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        if parts.is_empty() {
            return f.write_str("pt");
        }
        f.write_str(&parts.join(" x "))
    }
}
