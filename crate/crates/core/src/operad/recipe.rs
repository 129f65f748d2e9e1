use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ordered, UnionFind};
use crate::ids::Label;
use crate::report::ValidationReport;
use crate::susy::Color;

use super::signature::{Factor, Mode, ModuliSignature};

pub type LabelPair = (Label, Label);

/// Normal form of a (weak) morphism between products of moduli spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingRecipe {
    pub source: ModuliSignature,
    pub target: ModuliSignature,
    /// Source factor index to target factor index.
    pub assignment: Vec<usize>,
    pub ns_gluings: Vec<BTreeSet<LabelPair>>,
    pub r_gluings: Vec<BTreeSet<LabelPair>>,
    /// Surviving source label to target label.
    pub relabeling: BTreeMap<Label, Label>,
    pub ramond_fiber_rank: usize,
}

fn factor_key(f: &Factor) -> (u32, &BTreeSet<Label>, &BTreeSet<Label>) {
    (f.genus, &f.ns, &f.r)
}

impl GluingRecipe {
    pub fn gluings(&self, c: Color) -> &Vec<BTreeSet<LabelPair>> {
        match c {
            Color::Ns => &self.ns_gluings,
            Color::R => &self.r_gluings,
        }
    }

    pub fn identity(sig: &ModuliSignature) -> GluingRecipe {
        let n = sig.factors.len();
        GluingRecipe {
            source: sig.clone(),
            target: sig.clone(),
            assignment: (0..n).collect(),
            ns_gluings: vec![BTreeSet::new(); n],
            r_gluings: vec![BTreeSet::new(); n],
            relabeling: sig.all_labels().map(|l| (l.clone(), l.clone())).collect(),
            ramond_fiber_rank: 0,
        }
        .canonical()
    }

    /// Deterministic factor order: sources by (own key, target key),
    /// targets by (own key, first source position).
    pub fn canonical(mut self) -> GluingRecipe {
        for gl in self.ns_gluings.iter_mut().chain(self.r_gluings.iter_mut()) {
            *gl = std::mem::take(gl)
                .into_iter()
                .map(|(a, b)| ordered(a, b))
                .collect();
        }
        let mut src_order: Vec<usize> = (0..self.source.factors.len()).collect();
        src_order.sort_by(|&a, &b| {
            let ka = (factor_key(&self.source.factors[a]), factor_key(&self.target.factors[self.assignment[a]]));
            let kb = (factor_key(&self.source.factors[b]), factor_key(&self.target.factors[self.assignment[b]]));
            ka.cmp(&kb)
        });
        let mut src_pos = vec![0; src_order.len()];
        for (new, &old) in src_order.iter().enumerate() {
            src_pos[old] = new;
        }
        let first_source = |t: usize| {
            (0..self.assignment.len())
                .filter(|&s| self.assignment[s] == t)
                .map(|s| src_pos[s])
                .min()
                .unwrap_or(usize::MAX)
        };
        let mut tgt_order: Vec<usize> = (0..self.target.factors.len()).collect();
        tgt_order.sort_by_key(|&t| (factor_key(&self.target.factors[t]), first_source(t)));
        let mut tgt_pos = vec![0; tgt_order.len()];
        for (new, &old) in tgt_order.iter().enumerate() {
            tgt_pos[old] = new;
        }
        GluingRecipe {
            source: ModuliSignature::new(
                src_order.iter().map(|&i| self.source.factors[i].clone()).collect(),
                self.source.mode,
            ),
            target: ModuliSignature::new(
                tgt_order.iter().map(|&i| self.target.factors[i].clone()).collect(),
                self.target.mode,
            ),
            assignment: src_order.iter().map(|&s| tgt_pos[self.assignment[s]]).collect(),
            ns_gluings: tgt_order.iter().map(|&t| self.ns_gluings[t].clone()).collect(),
            r_gluings: tgt_order.iter().map(|&t| self.r_gluings[t].clone()).collect(),
            relabeling: self.relabeling,
            ramond_fiber_rank: self.ramond_fiber_rank,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (name, sig) in [("source", &self.source), ("target", &self.target)] {
            let r = sig.validate();
            if !r.is_valid() {
                report.push(if name == "source" { "invalid source" } else { "invalid target" }, r.to_string());
            }
        }
        if self.source.mode != self.target.mode {
            report.push("mode mismatch", "source and target modes differ");
        }
        let (ns, nt) = (self.source.factors.len(), self.target.factors.len());
        if self.assignment.len() != ns {
            report.push("assignment domain", "one entry per source factor required");
        }
        if self.ns_gluings.len() != nt || self.r_gluings.len() != nt {
            report.push("gluings shape", "one gluing set per target factor required");
        }
        if self.assignment.iter().any(|&t| t >= nt) {
            report.push("assignment range", "target index out of range");
        }
        if !report.is_valid() {
            return report;
        }
        let hit: BTreeSet<usize> = self.assignment.iter().copied().collect();
        if hit.len() != nt {
            report.push("assignment not surjective", format!("{} of {nt} targets hit", hit.len()));
        }

        let mut used: BTreeSet<&Label> = BTreeSet::new();
        let mut uf = UnionFind::new(0..ns);
        let mut pairs_at = vec![0i64; nt];
        let mut r_pairs = 0;
        for c in Color::ALL {
            for (t, pairs) in self.gluings(c).iter().enumerate() {
                for (a, b) in pairs {
                    for x in [a, b] {
                        if !used.insert(x) {
                            report.push("label glued twice", x.to_string());
                        }
                        if self.source.color_of(x) != Some(c) {
                            report.push("gluing color", format!("{x} is not a source {c} label"));
                        }
                    }
                    let (Some(fa), Some(fb)) = (self.source.factor_of(a), self.source.factor_of(b)) else {
                        continue;
                    };
                    if self.assignment[fa] != t || self.assignment[fb] != t {
                        report.push("gluing off target", format!("({a},{b}) listed at target {t}"));
                    }
                    uf.union(&fa, &fb);
                    pairs_at[t] += 1;
                    if c == Color::R {
                        r_pairs += 1;
                    }
                }
            }
        }
        for (s, t) in &self.relabeling {
            if used.contains(s) {
                report.push("glued label relabeled", s.to_string());
            }
            match (self.source.factor_of(s), self.target.factor_of(t)) {
                (Some(fs), Some(ft)) => {
                    if self.assignment[fs] != ft {
                        report.push("relabeling moves factor", format!("{s} -> {t}"));
                    }
                    if self.source.color_of(s) != self.target.color_of(t) {
                        report.push("relabeling changes color", format!("{s} -> {t}"));
                    }
                }
                _ => report.push("relabeling outside signatures", format!("{s} -> {t}")),
            }
        }
        let images: BTreeSet<&Label> = self.relabeling.values().collect();
        if images.len() != self.relabeling.len() {
            report.push("relabeling not injective", "");
        }
        let target_labels: BTreeSet<&Label> = self.target.all_labels().collect();
        if images != target_labels {
            report.push("relabeling not onto", "target labels must be exactly the relabeled survivors");
        }
        for l in self.source.all_labels() {
            if !used.contains(l) && !self.relabeling.contains_key(l) {
                report.push("label dropped", l.to_string());
            }
        }

        let mut expected = vec![1i64; nt];
        for (s, &t) in self.assignment.iter().enumerate() {
            expected[t] += self.source.factors[s].genus as i64 - 1;
        }
        for t in 0..nt {
            if expected[t] + pairs_at[t] != self.target.factors[t].genus as i64 {
                report.push(
                    "genus bookkeeping",
                    format!("target {t}: genus {} but sources give {}", self.target.factors[t].genus, expected[t] + pairs_at[t]),
                );
            }
        }
        let mut root_of: BTreeMap<usize, usize> = BTreeMap::new();
        for s in 0..ns {
            let root = uf.find(&s);
            if *root_of.entry(self.assignment[s]).or_insert(root) != root {
                report.push("disconnected target", format!("sources over target {} not linked by gluings", self.assignment[s]));
            }
        }
        let expected_rank = if self.source.mode == Mode::Super { r_pairs } else { 0 };
        if self.ramond_fiber_rank != expected_rank {
            report.push(
                "ramond fiber rank",
                format!("rank {} but {expected_rank} expected", self.ramond_fiber_rank),
            );
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidRecipe)
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &GluingRecipe) -> Result<GluingRecipe> {
        if self.target != other.source {
            return Err(Error::EndpointMismatch(format!(
                "recipe target {} differs from source {}",
                self.target, other.source
            )));
        }
        let inverse: BTreeMap<&Label, &Label> = self.relabeling.iter().map(|(a, b)| (b, a)).collect();
        let pull = |l: &Label| -> Result<Label> {
            inverse
                .get(l)
                .map(|x| (*x).clone())
                .ok_or_else(|| Error::Inconsistent(format!("label {l} has no preimage")))
        };
        let nt = other.target.factors.len();
        let mut gl = [vec![BTreeSet::new(); nt], vec![BTreeSet::new(); nt]];
        for (ci, c) in Color::ALL.into_iter().enumerate() {
            for (b, pairs) in self.gluings(c).iter().enumerate() {
                gl[ci][other.assignment[b]].extend(pairs.iter().cloned());
            }
            for (t, pairs) in other.gluings(c).iter().enumerate() {
                for (x, y) in pairs {
                    gl[ci][t].insert(ordered(pull(x)?, pull(y)?));
                }
            }
        }
        let [ns_gluings, r_gluings] = gl;
        let relabeling = self
            .relabeling
            .iter()
            .filter_map(|(a, b)| other.relabeling.get(b).map(|c| (a.clone(), c.clone())))
            .collect();
        Ok(GluingRecipe {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment: self.assignment.iter().map(|&b| other.assignment[b]).collect(),
            ns_gluings,
            r_gluings,
            relabeling,
            ramond_fiber_rank: self.ramond_fiber_rank + other.ramond_fiber_rank,
        }
        .canonical())
    }

    /// Side-by-side product; label sets must be disjoint.
    pub fn tensor(&self, other: &GluingRecipe) -> Result<GluingRecipe> {
        if self.source.mode != other.source.mode {
            return Err(Error::Inconsistent("tensor of super and classical recipes".into()));
        }
        let clash = self.source.all_labels().any(|l| other.source.factor_of(l).is_some())
            || self.target.all_labels().any(|l| other.target.factor_of(l).is_some());
        if clash {
            return Err(Error::Label("tensor factors share labels".into()));
        }
        let off = self.target.factors.len();
        let cat = |a: &ModuliSignature, b: &ModuliSignature| {
            ModuliSignature::new(a.factors.iter().chain(&b.factors).cloned().collect(), a.mode)
        };
        let mut relabeling = self.relabeling.clone();
        relabeling.extend(other.relabeling.clone());
        Ok(GluingRecipe {
            source: cat(&self.source, &other.source),
            target: cat(&self.target, &other.target),
            assignment: self
                .assignment
                .iter()
                .copied()
                .chain(other.assignment.iter().map(|t| t + off))
                .collect(),
            ns_gluings: self.ns_gluings.iter().chain(&other.ns_gluings).cloned().collect(),
            r_gluings: self.r_gluings.iter().chain(&other.r_gluings).cloned().collect(),
            relabeling,
            ramond_fiber_rank: self.ramond_fiber_rank + other.ramond_fiber_rank,
        }
        .canonical())
    }
}

/// `r2 ∘ r1`.
pub fn recipe_compose(r1: &GluingRecipe, r2: &GluingRecipe) -> Result<GluingRecipe> {
    r1.then(r2)
}
