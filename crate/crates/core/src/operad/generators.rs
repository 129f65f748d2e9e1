use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ids::Label;
use crate::susy::Color;

use super::recipe::GluingRecipe;
use super::signature::{Factor, Mode, ModuliSignature};

/// Renames labels by color-wise bijections; missing labels stay put.
pub fn generator_relabel(
    sig: &ModuliSignature,
    s_ns: &BTreeMap<Label, Label>,
    s_r: &BTreeMap<Label, Label>,
) -> Result<GluingRecipe> {
    for (c, s) in [(Color::Ns, s_ns), (Color::R, s_r)] {
        for l in s.keys() {
            if sig.color_of(l) != Some(c) {
                return Err(Error::Color(format!("{l} is not a {c} label")));
            }
        }
    }
    let rename = |c: Color, l: &Label| {
        let s = if c == Color::Ns { s_ns } else { s_r };
        s.get(l).cloned().unwrap_or_else(|| l.clone())
    };
    let mut relabeling = BTreeMap::new();
    let mut factors = Vec::new();
    for f in &sig.factors {
        let mut g = Factor { genus: f.genus, ns: BTreeSet::new(), r: BTreeSet::new() };
        for c in Color::ALL {
            for l in f.labels(c) {
                let new = rename(c, l);
                g.labels_mut(c).insert(new.clone());
                relabeling.insert(l.clone(), new);
            }
        }
        factors.push(g);
    }
    let images: BTreeSet<&Label> = relabeling.values().collect();
    if images.len() != relabeling.len() {
        return Err(Error::Label("relabeling is not injective".into()));
    }
    let n = factors.len();
    Ok(GluingRecipe {
        source: sig.clone(),
        target: ModuliSignature::new(factors, sig.mode),
        assignment: (0..n).collect(),
        ns_gluings: vec![BTreeSet::new(); n],
        r_gluings: vec![BTreeSet::new(); n],
        relabeling,
        ramond_fiber_rank: 0,
    }
    .canonical())
}

fn glue(factors: &[Factor], mode: Mode, color: Color, i: &Label, j: &Label) -> Result<GluingRecipe> {
    if i == j {
        return Err(Error::Label(format!("cannot glue {i} to itself")));
    }
    let mut seen = BTreeSet::new();
    for l in factors.iter().flat_map(Factor::all_labels) {
        if !seen.insert(l) {
            return Err(Error::Label(format!("label {l} occurs twice")));
        }
    }
    let owner = |l: &Label| {
        factors
            .iter()
            .position(|f| f.labels(color).contains(l))
            .ok_or_else(|| Error::Color(format!("{l} is not a {color} label")))
    };
    let (fi, fj) = (owner(i)?, owner(j)?);
    match factors.len() {
        1 => {}
        2 if fi != fj => {}
        _ => {
            return Err(Error::Label(
                "loop gluing takes one factor, edge gluing two with one label each".into(),
            ))
        }
    }
    let mut merged = Factor {
        genus: factors.iter().map(|f| f.genus).sum::<u32>() + if factors.len() == 1 { 1 } else { 0 },
        ns: BTreeSet::new(),
        r: BTreeSet::new(),
    };
    let mut relabeling = BTreeMap::new();
    for f in factors {
        for c in Color::ALL {
            for l in f.labels(c).iter().filter(|l| *l != i && *l != j) {
                merged.labels_mut(c).insert(l.clone());
                relabeling.insert(l.clone(), l.clone());
            }
        }
    }
    let pair = BTreeSet::from([crate::graph::ordered(i.clone(), j.clone())]);
    let (ns_gluings, r_gluings) = match color {
        Color::Ns => (vec![pair], vec![BTreeSet::new()]),
        Color::R => (vec![BTreeSet::new()], vec![pair]),
    };
    let recipe = GluingRecipe {
        source: ModuliSignature::new(factors.to_vec(), mode),
        target: ModuliSignature::new(vec![merged], mode),
        assignment: vec![0; factors.len()],
        ns_gluings,
        r_gluings,
        relabeling,
        ramond_fiber_rank: usize::from(color == Color::R && mode == Mode::Super),
    }
    .canonical();
    recipe.ensure_valid()?;
    Ok(recipe)
}

pub fn generator_glue_ns(a: &Factor, b: &Factor, i: &Label, i2: &Label) -> Result<GluingRecipe> {
    glue(&[a.clone(), b.clone()], Mode::Super, Color::Ns, i, i2)
}

pub fn generator_glue_ns_loop(a: &Factor, i: &Label, i2: &Label) -> Result<GluingRecipe> {
    glue(std::slice::from_ref(a), Mode::Super, Color::Ns, i, i2)
}

pub fn generator_glue_r(a: &Factor, b: &Factor, j: &Label, j2: &Label) -> Result<GluingRecipe> {
    glue(&[a.clone(), b.clone()], Mode::Super, Color::R, j, j2)
}

pub fn generator_glue_r_loop(a: &Factor, j: &Label, j2: &Label) -> Result<GluingRecipe> {
    glue(std::slice::from_ref(a), Mode::Super, Color::R, j, j2)
}

/// Classical gluing of two labels, on one factor (loop) or two.
pub fn generator_glue_classical(factors: &[Factor], i: &Label, i2: &Label) -> Result<GluingRecipe> {
    glue(factors, Mode::Classical, Color::Ns, i, i2)
}

/// Glues labels `i`, `i2` of `sig`, acting as the identity on every
/// factor not carrying them.
pub fn glue_in(sig: &ModuliSignature, color: Color, i: &Label, i2: &Label) -> Result<GluingRecipe> {
    let (Some(fi), Some(fj)) = (sig.factor_of(i), sig.factor_of(i2)) else {
        return Err(Error::Label(format!("({i},{i2}) not both present")));
    };
    let touched: Vec<Factor> = if fi == fj {
        vec![sig.factors[fi].clone()]
    } else {
        vec![sig.factors[fi].clone(), sig.factors[fj].clone()]
    };
    let rest = ModuliSignature::new(
        sig.factors
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != fi && *k != fj)
            .map(|(_, f)| f.clone())
            .collect(),
        sig.mode,
    );
    glue(&touched, sig.mode, color, i, i2)?.tensor(&GluingRecipe::identity(&rest))
}
