//! Constraint models for the three parts of a differential-linear trail.
//!
//! Variables follow the naming scheme `part_symbol_round_bit`, e.g. `d_alpha_3_7`
//! is bit 7 of the left branch entering differential round 3. Bit `i` always means
//! the coefficient of `2^i`, so rotations by `S^t` read bit `i - t`.
//!
//! Exact counts, with `n` the branch width:
//!
//! * differential, per round: `18n + 2` rows for the round function and `6n + 1`
//!   variables, plus `4n` rows tying `beta ^ alpha^r` to `alpha^{r+2}`; once per
//!   model, `2n` input variables, the non-triviality row, and `Pro` with its row.
//! * linear, per round: `8n^2 + 8n + 2` rows and `3n^2 + 4n + 1` variables; once
//!   per model, `2n` input variables, the non-triviality row, and `Cor_l` with its row.
//! * middle: `3n R_m + 6n + 1` rows and `3n R_m + 6n + 1` variables.
//! * merged: the three parts plus `Cor_e` and its row, which is `2 R_d + 2 R_l + 6`
//!   rows and `R_d + R_l + 4` variables above the rounded published totals.

mod assign;
mod build;
mod check;
mod lp;

pub use assign::{diff_assignment, lin_assignment, middle_assignment, trail_assignment};
pub use build::{
    add_diff_part, add_lin_part, add_middle_part, build_diff_model, build_full_model, build_lin_model,
    build_middle_model, DiffPart, LinPart, MiddlePart,
};
pub use check::{check_assignment, CheckReport};
pub use lp::{emit_model, parse_model};

use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// `sum linear + sum quad  (sense)  rhs`; a row is quadratic when `quad` is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub linear: Vec<(f64, usize)>,
    pub quad: Vec<(f64, usize, usize)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneralKind {
    /// `out = |arg|`
    Abs,
    /// `out = log2(arg)`, `-inf` at zero
    Log2,
    /// `out = a & b`
    And,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralConstraint {
    pub name: String,
    pub kind: GeneralKind,
    pub out: usize,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub integers: usize,
    pub continuous: usize,
    pub linear: usize,
    pub quadratic: usize,
    pub general: usize,
}

impl ModelStats {
    pub fn constraints(&self) -> usize {
        self.linear + self.quadratic + self.general
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"variables\": {}, \"binaries\": {}, \"integers\": {}, \"continuous\": {}, \"linear\": {}, \"quadratic\": {}, \"general\": {}, \"constraints\": {}}}",
            self.variables,
            self.binaries,
            self.integers,
            self.continuous,
            self.linear,
            self.quadratic,
            self.general,
            self.constraints()
        )
    }
}

/// Concrete values by variable name.
pub type Assignment = BTreeMap<String, f64>;

#[derive(Debug, Clone, Default)]
pub struct ConstraintModel {
    pub name: String,
    pub comments: Vec<String>,
    pub vars: Vec<Variable>,
    index: HashMap<String, usize>,
    pub constraints: Vec<Constraint>,
    pub generals: Vec<GeneralConstraint>,
    pub objective: Option<(ObjSense, Vec<(f64, usize)>)>,
}

impl PartialEq for ConstraintModel {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vars == other.vars
            && self.constraints == other.constraints
            && self.generals == other.generals
            && self.objective == other.objective
    }
}

impl ConstraintModel {
    pub fn new(name: impl Into<String>) -> Self {
        ConstraintModel { name: name.into(), ..Default::default() }
    }

    /// Declare a variable; names must be unique.
    pub fn var(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> usize {
        let name = name.into();
        assert!(!self.index.contains_key(&name), "duplicate variable {name}");
        let id = self.vars.len();
        self.index.insert(name.clone(), id);
        self.vars.push(Variable { name, kind, lower, upper });
        id
    }

    pub fn binary(&mut self, name: impl Into<String>) -> usize {
        self.var(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn binaries(&mut self, prefix: &str, n: u32) -> Vec<usize> {
        (0..n).map(|i| self.binary(format!("{prefix}_{i}"))).collect()
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name_of(&self, id: usize) -> &str {
        &self.vars[id].name
    }

    pub fn add_linear(&mut self, name: impl Into<String>, linear: Vec<(f64, usize)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint { name: name.into(), linear, quad: Vec::new(), sense, rhs });
    }

    pub fn add_quadratic(
        &mut self,
        name: impl Into<String>,
        linear: Vec<(f64, usize)>,
        quad: Vec<(f64, usize, usize)>,
        sense: Sense,
        rhs: f64,
    ) {
        self.constraints.push(Constraint { name: name.into(), linear, quad, sense, rhs });
    }

    pub fn add_general(&mut self, name: impl Into<String>, kind: GeneralKind, out: usize, args: Vec<usize>) {
        self.generals.push(GeneralConstraint { name: name.into(), kind, out, args });
    }

    pub fn set_objective(&mut self, sense: ObjSense, expr: Vec<(f64, usize)>) {
        self.objective = Some((sense, expr));
    }

    pub fn stats(&self) -> ModelStats {
        let count = |k| self.vars.iter().filter(|v| v.kind == k).count();
        let quadratic = self.constraints.iter().filter(|c| !c.quad.is_empty()).count();
        ModelStats {
            variables: self.vars.len(),
            binaries: count(VarKind::Binary),
            integers: count(VarKind::Integer),
            continuous: count(VarKind::Continuous),
            linear: self.constraints.len() - quadratic,
            quadratic,
            general: self.generals.len(),
        }
    }

    /// Move every variable and row of `other` into `self`; shared names are errors.
    pub fn absorb(&mut self, other: ConstraintModel) -> Vec<usize> {
        let remap: Vec<usize> = other.vars.iter().map(|v| self.var(v.name.clone(), v.kind, v.lower, v.upper)).collect();
        for mut c in other.constraints {
            c.linear.iter_mut().for_each(|t| t.1 = remap[t.1]);
            c.quad.iter_mut().for_each(|t| {
                t.1 = remap[t.1];
                t.2 = remap[t.2];
            });
            self.constraints.push(c);
        }
        for mut g in other.generals {
            g.out = remap[g.out];
            g.args.iter_mut().for_each(|a| *a = remap[*a]);
            self.generals.push(g);
        }
        self.comments.extend(other.comments);
        remap
    }
}
