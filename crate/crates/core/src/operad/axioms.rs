use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::ids::Label;
use crate::susy::Color;

use super::generators::{generator_relabel, glue_in};
use super::recipe::GluingRecipe;
use super::signature::{Factor, Mode, ModuliSignature};

pub const CONDITIONS: [&str; 6] = [
    "relabelings compose",
    "relabeling commutes with loop gluing",
    "relabeling commutes with edge gluing",
    "loop gluings commute",
    "loop and edge gluings commute",
    "edge gluings commute",
];

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: usize,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    pub seed: u64,
    pub conditions: Vec<ConditionReport>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.failures.is_empty())
    }
}

/// Builds random stable factors with prescribed labels.
struct Instance {
    rng: ChaCha8Rng,
    next: usize,
}

impl Instance {
    fn fresh(&mut self) -> Label {
        self.next += 1;
        Label(format!("x{}", self.next))
    }

    fn color(&mut self) -> Color {
        if self.rng.random_bool(0.5) {
            Color::Ns
        } else {
            Color::R
        }
    }

    /// A factor holding `needed` plus random extras, padded to be stable
    /// with an even number of Ramond labels.
    fn factor(&mut self, needed: &[(Label, Color)]) -> Factor {
        let mut f = Factor { genus: self.rng.random_range(0..3), ns: BTreeSet::new(), r: BTreeSet::new() };
        for (l, c) in needed {
            f.labels_mut(*c).insert(l.clone());
        }
        for _ in 0..self.rng.random_range(0..3) {
            let (l, c) = (self.fresh(), self.color());
            f.labels_mut(c).insert(l);
        }
        if f.r.len() % 2 == 1 {
            let l = self.fresh();
            f.r.insert(l);
        }
        while !f.is_stable() {
            let l = self.fresh();
            f.ns.insert(l);
        }
        f
    }

    fn pair(&mut self) -> (Label, Label, Color) {
        (self.fresh(), self.fresh(), self.color())
    }

    fn signature(&mut self, factors: Vec<Factor>) -> ModuliSignature {
        let extra = self.rng.random_range(0..2);
        let mut all = factors;
        for _ in 0..extra {
            let f = self.factor(&[]);
            all.push(f);
        }
        ModuliSignature::new(all, Mode::Super).sorted()
    }

    /// A random color-preserving renaming of every label to fresh names.
    fn renaming(&mut self, sig: &ModuliSignature) -> [BTreeMap<Label, Label>; 2] {
        let mut out = [BTreeMap::new(), BTreeMap::new()];
        for (i, c) in Color::ALL.into_iter().enumerate() {
            let labels: Vec<Label> = sig.factors.iter().flat_map(|f| f.labels(c).iter().cloned()).collect();
            let mut images: Vec<Label> = labels.iter().map(|_| self.fresh()).collect();
            images.shuffle(&mut self.rng);
            out[i] = labels.into_iter().zip(images).collect();
        }
        out
    }
}

fn relabel(sig: &ModuliSignature, s: &[BTreeMap<Label, Label>; 2]) -> Result<GluingRecipe> {
    let keep = |m: &BTreeMap<Label, Label>| -> BTreeMap<Label, Label> {
        m.iter()
            .filter(|(k, _)| sig.factor_of(k).is_some())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    };
    generator_relabel(sig, &keep(&s[0]), &keep(&s[1]))
}

fn chain(start: &ModuliSignature, steps: &[&dyn Fn(&ModuliSignature) -> Result<GluingRecipe>]) -> Result<GluingRecipe> {
    let mut acc = GluingRecipe::identity(start);
    for step in steps {
        let next = step(&acc.target)?;
        acc = acc.then(&next)?;
    }
    Ok(acc)
}

fn glue(c: Color, a: Label, b: Label) -> impl Fn(&ModuliSignature) -> Result<GluingRecipe> {
    move |s: &ModuliSignature| glue_in(s, c, &a, &b)
}

/// Both sides of one randomized instance of a condition.
fn instance(condition: usize, rng: ChaCha8Rng) -> Result<(GluingRecipe, GluingRecipe)> {
    let mut ins = Instance { rng, next: 0 };
    match condition {
        1 => {
            let factors = (0..ins.rng.random_range(1..4)).map(|_| ins.factor(&[])).collect();
            let sig = ins.signature(factors);
            let s1 = ins.renaming(&sig);
            let r1 = relabel(&sig, &s1)?;
            let s2 = ins.renaming(&r1.target);
            let lhs = r1.then(&relabel(&r1.target, &s2)?)?;
            let composed: [BTreeMap<Label, Label>; 2] =
                [0, 1].map(|i| s1[i].iter().map(|(a, b)| (a.clone(), s2[i][b].clone())).collect());
            Ok((lhs, relabel(&sig, &composed)?))
        }
        2 | 3 => {
            let (i, j, c) = ins.pair();
            let factors = if condition == 2 {
                vec![ins.factor(&[(i.clone(), c), (j.clone(), c)])]
            } else {
                vec![ins.factor(&[(i.clone(), c)]), ins.factor(&[(j.clone(), c)])]
            };
            let sig = ins.signature(factors);
            let s = ins.renaming(&sig);
            let ci = usize::from(c == Color::R);
            let (si, sj) = (s[ci][&i].clone(), s[ci][&j].clone());
            let lhs = chain(&sig, &[&glue(c, i, j), &|t: &ModuliSignature| relabel(t, &s)])?;
            let rhs = chain(&sig, &[&|t: &ModuliSignature| relabel(t, &s), &glue(c, si, sj)])?;
            Ok((lhs, rhs))
        }
        4 => {
            let (a, a2, ca) = ins.pair();
            let (b, b2, cb) = ins.pair();
            let f = ins.factor(&[(a.clone(), ca), (a2.clone(), ca), (b.clone(), cb), (b2.clone(), cb)]);
            let sig = ins.signature(vec![f]);
            let lhs = chain(&sig, &[&glue(ca, a.clone(), a2.clone()), &glue(cb, b.clone(), b2.clone())])?;
            let rhs = chain(&sig, &[&glue(cb, b, b2), &glue(ca, a, a2)])?;
            Ok((lhs, rhs))
        }
        5 => {
            let (a, a2, ca) = ins.pair();
            let (b, b2, cb) = ins.pair();
            // either a loop beside an edge, or two pairs both spanning the factors
            let factors = if ins.rng.random_bool(0.5) {
                vec![
                    ins.factor(&[(a.clone(), ca), (a2.clone(), ca), (b.clone(), cb)]),
                    ins.factor(&[(b2.clone(), cb)]),
                ]
            } else {
                vec![
                    ins.factor(&[(a.clone(), ca), (b.clone(), cb)]),
                    ins.factor(&[(a2.clone(), ca), (b2.clone(), cb)]),
                ]
            };
            let sig = ins.signature(factors);
            let lhs = chain(&sig, &[&glue(ca, a.clone(), a2.clone()), &glue(cb, b.clone(), b2.clone())])?;
            let rhs = chain(&sig, &[&glue(cb, b, b2), &glue(ca, a, a2)])?;
            Ok((lhs, rhs))
        }
        _ => {
            let (a, a2, ca) = ins.pair();
            let (b, b2, cb) = ins.pair();
            // a path of three factors, or two disjoint edges on four
            let factors = if ins.rng.random_bool(0.5) {
                vec![
                    ins.factor(&[(a.clone(), ca)]),
                    ins.factor(&[(a2.clone(), ca), (b.clone(), cb)]),
                    ins.factor(&[(b2.clone(), cb)]),
                ]
            } else {
                vec![
                    ins.factor(&[(a.clone(), ca)]),
                    ins.factor(&[(a2.clone(), ca)]),
                    ins.factor(&[(b.clone(), cb)]),
                    ins.factor(&[(b2.clone(), cb)]),
                ]
            };
            let sig = ins.signature(factors);
            let lhs = chain(&sig, &[&glue(ca, a.clone(), a2.clone()), &glue(cb, b.clone(), b2.clone())])?;
            let rhs = chain(&sig, &[&glue(cb, b, b2), &glue(ca, a, a2)])?;
            Ok((lhs, rhs))
        }
    }
}

fn case_rng(seed: u64, condition: usize, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((condition as u64) << 32) | case as u64);
    rng
}

/// Randomized check of the six operad conditions in the recipe category.
pub fn check_operad_axioms(seed: u64, cases: usize) -> AxiomReport {
    if cases == 0 {
        return AxiomReport { seed, conditions: Vec::new() };
    }
    let conditions = CONDITIONS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let condition = k + 1;
            let failures = (0..cases)
                .into_par_iter()
                .filter_map(|case| match instance(condition, case_rng(seed, condition, case)) {
                    Ok((lhs, rhs)) if lhs == rhs => lhs
                        .ensure_valid()
                        .err()
                        .map(|e| format!("case {case}: {e}")),
                    Ok((lhs, rhs)) => Some(format!(
                        "case {case}: {} != {}",
                        serde_json::to_string(&lhs).unwrap_or_default(),
                        serde_json::to_string(&rhs).unwrap_or_default()
                    )),
                    Err(e) => Some(format!("case {case}: {e}")),
                })
                .collect();
            ConditionReport { condition, name, cases, failures }
        })
        .collect();
    AxiomReport { seed, conditions }
}
