//! Infinite weight families as expression trees.
//!
//! The maximally untwisted `q`-cohomological weights (for `p > q`) are built from
//! lower degrees by two operations: a Frobenius twist `p^n·λ` with a free
//! exponent `n ≥ 0`, and the shift `λ ∥ (q − i)`. A [`FamilyExpr`] records one
//! such construction; [`evaluate`] instantiates it at a prime and an exponent
//! assignment, [`expand`] enumerates every instance up to a bound, and
//! [`to_symbolic`] turns it into a polynomial in `p` and `p^n`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::weights::{frobenius_twist, shift, Prime, ResidueClass, Weight};

/// A twist exponent, rendered `n1`, `n2`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub u32);

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl Serialize for ParamId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub type Assignment = BTreeMap<ParamId, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("no value assigned to parameter {0}")]
    MissingParameter(ParamId),
    #[error("parameter {0} is bound by more than one twist")]
    DuplicateParameter(ParamId),
    #[error("cannot parse family expression {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("family of degree {degree} needs p > {degree}, got p = {p}")]
    HypothesisViolation { p: Prime, degree: u32 },
    #[error("residue class depends on whether {param} is zero; branches: {}", render_branches(.branches))]
    AmbiguousClass {
        param: ParamId,
        branches: Vec<SymbolicBranch>,
    },
}

fn render_branches(branches: &[SymbolicBranch]) -> String {
    branches
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyExpr {
    Zero,
    Twist(Box<FamilyExpr>, ParamId),
    Shift(Box<FamilyExpr>, u32),
}

impl FamilyExpr {
    pub fn twist(child: FamilyExpr, param: ParamId) -> Self {
        FamilyExpr::Twist(Box::new(child), param)
    }

    pub fn shift(child: FamilyExpr, amount: u32) -> Self {
        FamilyExpr::Shift(Box::new(child), amount)
    }

    /// Parameters innermost first.
    pub fn params(&self) -> Vec<ParamId> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut Vec<ParamId>) {
        match self {
            FamilyExpr::Zero => {}
            FamilyExpr::Twist(child, param) => {
                child.collect_params(out);
                out.push(*param);
            }
            FamilyExpr::Shift(child, _) => child.collect_params(out),
        }
    }

    /// The cohomological degree the family lives in: the sum of its shift amounts.
    pub fn degree(&self) -> u32 {
        match self {
            FamilyExpr::Zero => 0,
            FamilyExpr::Twist(child, _) => child.degree(),
            FamilyExpr::Shift(child, amount) => child.degree() + amount,
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let mut seen = HashSet::new();
        for param in self.params() {
            if !seen.insert(param) {
                return Err(FamilyError::DuplicateParameter(param));
            }
        }
        Ok(())
    }

    /// Renames parameters to `n1, n2, ...` innermost first, so that structurally
    /// equal families compare equal.
    pub fn canonical(&self) -> FamilyExpr {
        let renaming: BTreeMap<ParamId, ParamId> = self
            .params()
            .into_iter()
            .enumerate()
            .map(|(i, param)| (param, ParamId(i as u32 + 1)))
            .collect();
        self.rename(&renaming)
    }

    fn rename(&self, renaming: &BTreeMap<ParamId, ParamId>) -> FamilyExpr {
        match self {
            FamilyExpr::Zero => FamilyExpr::Zero,
            FamilyExpr::Twist(child, param) => {
                FamilyExpr::twist(child.rename(renaming), renaming[param])
            }
            FamilyExpr::Shift(child, amount) => FamilyExpr::shift(child.rename(renaming), *amount),
        }
    }
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyExpr::Zero => write!(f, "0"),
            FamilyExpr::Twist(child, param) => write!(f, "twist({child},{param})"),
            FamilyExpr::Shift(child, amount) => write!(f, "shift({child},{amount})"),
        }
    }
}

impl Serialize for FamilyExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for FamilyExpr {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { input: s, pos: 0 };
        let expr = parser.expr()?;
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        expr.validate()?;
        Ok(expr)
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> FamilyError {
        FamilyError::Parse {
            input: self.input.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.input[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), FamilyError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<u32, FamilyError> {
        let rest = &self.input[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        let value = rest[..len]
            .parse()
            .map_err(|_| self.error("expected a number"))?;
        self.pos += len;
        Ok(value)
    }

    fn expr(&mut self) -> Result<FamilyExpr, FamilyError> {
        if self.eat("twist(") {
            let child = self.expr()?;
            self.expect(",n")?;
            let param = ParamId(self.number()?);
            self.expect(")")?;
            Ok(FamilyExpr::twist(child, param))
        } else if self.eat("shift(") {
            let child = self.expr()?;
            self.expect(",")?;
            let amount = self.number()?;
            self.expect(")")?;
            Ok(FamilyExpr::shift(child, amount))
        } else if self.eat("0") {
            Ok(FamilyExpr::Zero)
        } else {
            Err(self.error("expected 0, twist( or shift("))
        }
    }
}

/// The generating families of the maximally untwisted `q`-cohomological weights:
/// `{0}` for `q = 0`, and `shift(twist(e, fresh), q − i)` over every family `e`
/// of every degree `i < q`.
pub fn wq_families(q: u32) -> Vec<FamilyExpr> {
    let mut by_degree: Vec<Vec<FamilyExpr>> = vec![vec![FamilyExpr::Zero]];
    for degree in 1..=q {
        let mut seen = HashSet::new();
        let mut families = Vec::new();
        for (lower, lower_families) in by_degree.iter().enumerate() {
            for child in lower_families {
                let fresh = ParamId(child.params().len() as u32 + 1);
                let family = FamilyExpr::shift(
                    FamilyExpr::twist(child.clone(), fresh),
                    degree - lower as u32,
                )
                .canonical();
                if seen.insert(family.clone()) {
                    families.push(family);
                }
            }
        }
        by_degree.push(families);
    }
    by_degree.swap_remove(q as usize)
}

/// Instantiates a family. `Ok(None)` when some shift is undefined on its input.
pub fn evaluate(
    expr: &FamilyExpr,
    p: Prime,
    assignment: &Assignment,
) -> Result<Option<Weight>, FamilyError> {
    match expr {
        FamilyExpr::Zero => Ok(Some(Weight::zero())),
        FamilyExpr::Twist(child, param) => {
            let exponent = *assignment
                .get(param)
                .ok_or(FamilyError::MissingParameter(*param))?;
            let value = evaluate(child, p, assignment)?;
            Ok(value.map(|v| frobenius_twist(&v, p, exponent)))
        }
        FamilyExpr::Shift(child, amount) => {
            let value = evaluate(child, p, assignment)?;
            Ok(value.and_then(|v| shift(&v, u64::from(*amount), p).ok()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterRange {
    pub family: FamilyExpr,
    /// Largest exponent each parameter reached among instances within the bound.
    pub max_exponents: BTreeMap<ParamId, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionReport {
    pub concrete: BTreeSet<Weight>,
    pub truncated_at: Weight,
    pub parameter_ranges: Vec<ParameterRange>,
}

/// Every defined instance `≤ bound` of the given families.
///
/// Rejects primes `p ≤ degree`, outside which the families do not describe the
/// cohomological weights.
pub fn expand(
    families: &[FamilyExpr],
    p: Prime,
    bound: &Weight,
) -> Result<ExpansionReport, FamilyError> {
    for family in families {
        family.validate()?;
        let degree = family.degree();
        if degree > 0 && p.value() <= u64::from(degree) {
            return Err(FamilyError::HypothesisViolation { p, degree });
        }
    }

    let mut concrete = BTreeSet::new();
    let mut parameter_ranges = Vec::with_capacity(families.len());
    for family in families {
        let mut max_exponents = BTreeMap::new();
        for (value, assignment) in instances_up_to(family, p, bound) {
            concrete.insert(value);
            for (param, exponent) in assignment {
                let slot = max_exponents.entry(param).or_insert(0);
                *slot = (*slot).max(exponent);
            }
        }
        parameter_ranges.push(ParameterRange {
            family: family.clone(),
            max_exponents,
        });
    }
    Ok(ExpansionReport {
        concrete,
        truncated_at: bound.clone(),
        parameter_ranges,
    })
}

// Shift multiplies by p after moving at most `n` down, so `λ ∥ n ≤ bound`
// needs `λ ≤ bound / p + n`; twists grow geometrically from a nonzero base.
fn instances_up_to(expr: &FamilyExpr, p: Prime, bound: &Weight) -> Vec<(Weight, Assignment)> {
    match expr {
        FamilyExpr::Zero => vec![(Weight::zero(), Assignment::new())],
        FamilyExpr::Twist(child, param) => {
            let mut out = Vec::new();
            for (value, assignment) in instances_up_to(child, p, bound) {
                if value.is_zero() {
                    let mut assignment = assignment;
                    assignment.insert(*param, 0);
                    out.push((value, assignment));
                    continue;
                }
                let mut current = value;
                let mut exponent = 0;
                while &current <= bound {
                    let mut next_assignment = assignment.clone();
                    next_assignment.insert(*param, exponent);
                    let next = &current * p.value();
                    out.push((current, next_assignment));
                    current = next;
                    exponent += 1;
                }
            }
            out
        }
        FamilyExpr::Shift(child, amount) => {
            let child_bound =
                Weight::from(bound.as_biguint() / BigUint::from(p.value())) + u64::from(*amount);
            instances_up_to(child, p, &child_bound)
                .into_iter()
                .filter_map(|(value, assignment)| {
                    let shifted = shift(&value, u64::from(*amount), p).ok()?;
                    (&shifted <= bound).then_some((shifted, assignment))
                })
                .collect()
        }
    }
}

/// One term `coeff · p^(base_exp + Σ params)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: i64,
    pub base_exp: u32,
    pub params: Vec<ParamId>,
}

/// A polynomial in `p` and the twist powers `p^n`, with like terms combined.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolicWeight {
    terms: BTreeMap<(u32, Vec<ParamId>), i64>,
}

impl SymbolicWeight {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut out = Self::zero();
        for m in monomials {
            out.add_term(m.base_exp, m.params, m.coeff);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in rendering order: `(base_exp, params)` descending.
    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .rev()
            .map(|((base_exp, params), &coeff)| Monomial {
                coeff,
                base_exp: *base_exp,
                params: params.clone(),
            })
            .collect()
    }

    fn add_term(&mut self, base_exp: u32, mut params: Vec<ParamId>, coeff: i64) {
        params.sort_unstable();
        let key = (base_exp, params);
        let sum = self.terms.get(&key).copied().unwrap_or(0) + coeff;
        if sum == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    fn add_constant(&mut self, c: i64) {
        self.add_term(0, Vec::new(), c);
    }

    fn add_p_multiple(&mut self, c: i64) {
        self.add_term(1, Vec::new(), c);
    }

    fn times_p(&self) -> Self {
        SymbolicWeight {
            terms: self
                .terms
                .iter()
                .map(|((e, params), &c)| ((e + 1, params.clone()), c))
                .collect(),
        }
    }

    fn times_twist(&self, param: ParamId) -> Self {
        Self::from_monomials(self.monomials().into_iter().map(|mut m| {
            m.params.push(param);
            m
        }))
    }

    /// Parameters that occur in some term.
    pub fn params(&self) -> BTreeSet<ParamId> {
        self.terms
            .keys()
            .flat_map(|(_, params)| params.iter().copied())
            .collect()
    }

    pub fn evaluate(&self, p: Prime, assignment: &Assignment) -> Result<BigInt, FamilyError> {
        let mut total = BigInt::zero();
        for ((base_exp, params), &coeff) in &self.terms {
            let mut exponent = *base_exp;
            for param in params {
                exponent += *assignment
                    .get(param)
                    .ok_or(FamilyError::MissingParameter(*param))?;
            }
            total += BigInt::from(coeff) * BigInt::from(p.value()).pow(exponent);
        }
        Ok(total)
    }
}

impl fmt::Display for SymbolicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl Serialize for SymbolicWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Canonical text, e.g. `2p^(n1+2) - 2p^(n1+1) + 2p`.
pub fn render(weight: &SymbolicWeight) -> String {
    let monomials = weight.monomials();
    if monomials.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, m) in monomials.iter().enumerate() {
        let magnitude = m.coeff.unsigned_abs();
        match (i, m.coeff < 0) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let power = render_power(m.base_exp, &m.params);
        if power.is_empty() {
            out.push_str(&magnitude.to_string());
        } else {
            if magnitude != 1 {
                out.push_str(&magnitude.to_string());
            }
            out.push_str(&power);
        }
    }
    out
}

fn render_power(base_exp: u32, params: &[ParamId]) -> String {
    let mut parts: Vec<String> = params.iter().map(ToString::to_string).collect();
    match (parts.len(), base_exp) {
        (0, 0) => String::new(),
        (0, 1) => "p".to_string(),
        (0, e) => format!("p^{e}"),
        (1, 0) => format!("p^{}", parts[0]),
        _ => {
            if base_exp > 0 {
                parts.push(base_exp.to_string());
            }
            format!("p^({})", parts.join("+"))
        }
    }
}

/// Which side of `n = 0` a twist parameter is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamBranch {
    Zero,
    Positive,
}

pub type BranchContext = BTreeMap<ParamId, ParamBranch>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicBranch {
    pub context: BranchContext,
    pub weight: SymbolicWeight,
}

impl SymbolicBranch {
    /// Side conditions as text, e.g. `["n2 >= 1"]`.
    pub fn conditions(&self) -> Vec<String> {
        self.context
            .iter()
            .map(|(param, branch)| match branch {
                ParamBranch::Zero => format!("{param} = 0"),
                ParamBranch::Positive => format!("{param} >= 1"),
            })
            .collect()
    }
}

impl fmt::Display for SymbolicBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conditions = self.conditions();
        if conditions.is_empty() {
            write!(f, "{}", self.weight)
        } else {
            write!(f, "{} ({})", self.weight, conditions.join(", "))
        }
    }
}

impl Serialize for SymbolicBranch {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SymbolicBranch", 2)?;
        s.serialize_field("conditions", &self.conditions())?;
        s.serialize_field("weight", &render(&self.weight))?;
        s.end()
    }
}

/// Polynomial form of a family under the given parameter restrictions.
///
/// A shift needs its input's class mod `2p`. A twisted weight in the `−2` class
/// stays there only for exponent 0, so such a parameter must be pinned by the
/// context; otherwise both branches are reported in [`FamilyError::AmbiguousClass`].
/// Parameters pinned to zero disappear from the result.
pub fn to_symbolic(
    expr: &FamilyExpr,
    context: &BranchContext,
) -> Result<SymbolicWeight, FamilyError> {
    match symbolic_with_class(expr, context) {
        Ok((weight, _)) => Ok(weight),
        Err(param) => {
            let branches = [ParamBranch::Zero, ParamBranch::Positive]
                .into_iter()
                .flat_map(|branch| {
                    let mut narrowed = context.clone();
                    narrowed.insert(param, branch);
                    branches_from(expr, narrowed)
                })
                .collect();
            Err(FamilyError::AmbiguousClass { param, branches })
        }
    }
}

/// Every branch of [`to_symbolic`], splitting on `n = 0` / `n ≥ 1` only where needed.
pub fn symbolic_branches(expr: &FamilyExpr) -> Vec<SymbolicBranch> {
    branches_from(expr, BranchContext::new())
}

fn branches_from(expr: &FamilyExpr, context: BranchContext) -> Vec<SymbolicBranch> {
    match symbolic_with_class(expr, &context) {
        Ok((weight, _)) => vec![SymbolicBranch { context, weight }],
        Err(param) => [ParamBranch::Zero, ParamBranch::Positive]
            .into_iter()
            .flat_map(|branch| {
                let mut narrowed = context.clone();
                narrowed.insert(param, branch);
                branches_from(expr, narrowed)
            })
            .collect(),
    }
}

// Err carries the parameter whose branch is undetermined.
fn symbolic_with_class(
    expr: &FamilyExpr,
    context: &BranchContext,
) -> Result<(SymbolicWeight, ResidueClass), ParamId> {
    match expr {
        FamilyExpr::Zero => Ok((SymbolicWeight::zero(), ResidueClass::Zero)),
        FamilyExpr::Twist(child, param) => {
            let (weight, class) = symbolic_with_class(child, context)?;
            if weight.is_zero() {
                return Ok((weight, ResidueClass::Zero));
            }
            match (context.get(param), class) {
                (Some(ParamBranch::Zero), _) => Ok((weight, class)),
                (Some(ParamBranch::Positive), _) | (None, ResidueClass::Zero) => {
                    Ok((weight.times_twist(*param), ResidueClass::Zero))
                }
                (None, ResidueClass::MinusTwo) => Err(*param),
            }
        }
        FamilyExpr::Shift(child, amount) => {
            let (weight, class) = symbolic_with_class(child, context)?;
            let amount = i64::from(*amount);
            let mut out = weight.times_p();
            match class {
                ResidueClass::Zero => out.add_p_multiple(amount),
                ResidueClass::MinusTwo => out.add_p_multiple(-amount),
            }
            let odd = amount % 2 == 1;
            if odd {
                out.add_p_multiple(1);
                out.add_constant(-2);
            }
            let class = if odd {
                ResidueClass::MinusTwo
            } else {
                ResidueClass::Zero
            };
            Ok((out, class))
        }
    }
}

/// True when the assignment satisfies the branch restrictions.
pub fn assignment_in_branch(context: &BranchContext, assignment: &Assignment) -> bool {
    context
        .iter()
        .all(|(param, branch)| match (branch, assignment.get(param)) {
            (ParamBranch::Zero, Some(&v)) => v == 0,
            (ParamBranch::Positive, Some(&v)) => v >= 1,
            (_, None) => false,
        })
}

/// Converts a symbolic evaluation back to a weight; negative values are `None`.
pub fn to_weight(value: &BigInt) -> Option<Weight> {
    if value.is_negative() {
        None
    } else {
        value.to_biguint().map(Weight::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn fam(s: &str) -> FamilyExpr {
        s.parse().unwrap()
    }

    fn assign(pairs: &[(u32, u32)]) -> Assignment {
        pairs.iter().map(|&(k, v)| (ParamId(k), v)).collect()
    }

    #[test]
    fn generator_small_degrees() {
        assert_eq!(wq_families(0), vec![FamilyExpr::Zero]);
        assert_eq!(wq_families(1), vec![fam("shift(twist(0,n1),1)")]);
        assert_eq!(
            wq_families(2),
            vec![
                fam("shift(twist(0,n1),2)"),
                fam("shift(twist(shift(twist(0,n1),1),n2),1)")
            ]
        );
    }

    #[test]
    fn generator_counts_and_degrees() {
        for q in 1..=6 {
            let families = wq_families(q);
            assert_eq!(families.len(), 1 << (q - 1));
            for family in &families {
                assert_eq!(family.degree(), q);
                assert!(family.validate().is_ok());
                assert_eq!(family, &family.canonical());
                assert!(family.params().len() <= q as usize);
            }
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let text = "shift(twist(shift(twist(0,n1),1),n2),2)";
        assert_eq!(fam(text).to_string(), text);
        assert!(matches!(
            "shift(0,".parse::<FamilyExpr>(),
            Err(FamilyError::Parse { .. })
        ));
        assert!(matches!(
            "twist(0,x1)".parse::<FamilyExpr>(),
            Err(FamilyError::Parse { .. })
        ));
        assert!(matches!(
            "0 ".parse::<FamilyExpr>(),
            Err(FamilyError::Parse { .. })
        ));
        assert_eq!(
            "twist(twist(0,n1),n1)".parse::<FamilyExpr>(),
            Err(FamilyError::DuplicateParameter(ParamId(1)))
        );
    }

    #[test]
    fn canonical_renames_innermost_first() {
        let family = fam("shift(twist(shift(twist(0,n7),1),n3),2)");
        assert_eq!(
            family.canonical(),
            fam("shift(twist(shift(twist(0,n1),1),n2),2)")
        );
    }

    #[test]
    fn evaluate_examples() {
        let w1 = fam("shift(twist(0,n1),1)");
        assert_eq!(
            evaluate(&w1, p(5), &assign(&[(1, 4)])).unwrap(),
            Some(8u64.into())
        );
        let nested1 = fam("shift(twist(shift(twist(0,n1),1),n2),1)");
        assert_eq!(
            evaluate(&nested1, p(5), &assign(&[(1, 0), (2, 0)])).unwrap(),
            Some(38u64.into())
        );
        let nested2 = fam("shift(twist(shift(twist(0,n1),1),n2),2)");
        assert_eq!(
            evaluate(&nested2, p(5), &assign(&[(1, 0), (2, 1)])).unwrap(),
            Some(210u64.into())
        );
        assert_eq!(
            evaluate(&nested2, p(5), &assign(&[(1, 0)])),
            Err(FamilyError::MissingParameter(ParamId(2)))
        );
    }

    #[test]
    fn evaluate_reports_undefined_shift() {
        // 2p − 2 = 8 at p = 5 is ≡ −2, and 8 − 9 < 0.
        let family = fam("shift(twist(shift(twist(0,n1),1),n2),9)");
        assert_eq!(
            evaluate(&family, p(5), &assign(&[(1, 0), (2, 0)])).unwrap(),
            None
        );
    }

    #[test]
    fn expand_examples() {
        let bound = Weight::from(1000);
        let w1 = expand(&wq_families(1), p(5), &bound).unwrap();
        assert_eq!(w1.concrete, [8u64].into_iter().map(Weight::from).collect());
        let w2 = expand(&wq_families(2), p(5), &bound).unwrap();
        assert_eq!(
            w2.concrete,
            [10u64, 38, 208].into_iter().map(Weight::from).collect()
        );
        let w0 = expand(&wq_families(0), p(7), &Weight::zero()).unwrap();
        assert_eq!(w0.concrete, [Weight::zero()].into_iter().collect());
    }

    #[test]
    fn expand_tracks_parameter_ranges() {
        let report = expand(&wq_families(2), p(5), &Weight::from(1000)).unwrap();
        let nested = &report.parameter_ranges[1];
        // 208 = 5·(5·8 + 1) + 3 uses n2 = 1; n1 sits over a zero child and is swept once.
        assert_eq!(nested.max_exponents[&ParamId(2)], 1);
        assert_eq!(nested.max_exponents[&ParamId(1)], 0);
    }

    #[test]
    fn expand_rejects_small_primes() {
        assert_eq!(
            expand(&wq_families(3), p(3), &Weight::from(100)),
            Err(FamilyError::HypothesisViolation { p: p(3), degree: 3 })
        );
        assert!(expand(&wq_families(2), p(3), &Weight::from(100)).is_ok());
    }

    #[test]
    fn symbolic_examples() {
        let w1 = to_symbolic(&fam("shift(twist(0,n1),1)"), &BranchContext::new()).unwrap();
        assert_eq!(
            w1.monomials(),
            vec![
                Monomial {
                    coeff: 2,
                    base_exp: 1,
                    params: vec![]
                },
                Monomial {
                    coeff: -2,
                    base_exp: 0,
                    params: vec![]
                }
            ]
        );
        assert_eq!(render(&w1), "2p - 2");

        let nested = fam("shift(twist(shift(twist(0,n1),1),n2),2)");
        let positive = BranchContext::from([(ParamId(2), ParamBranch::Positive)]);
        assert_eq!(
            render(&to_symbolic(&nested, &positive).unwrap()),
            "2p^(n2+2) - 2p^(n2+1) + 2p"
        );
        let zero = BranchContext::from([(ParamId(2), ParamBranch::Zero)]);
        assert_eq!(render(&to_symbolic(&nested, &zero).unwrap()), "2p^2 - 4p");
    }

    #[test]
    fn symbolic_ambiguity_reports_both_branches() {
        let nested = fam("shift(twist(shift(twist(0,n1),1),n2),2)");
        match to_symbolic(&nested, &BranchContext::new()) {
            Err(FamilyError::AmbiguousClass { param, branches }) => {
                assert_eq!(param, ParamId(2));
                let rendered: Vec<String> = branches.iter().map(ToString::to_string).collect();
                assert_eq!(
                    rendered,
                    vec!["2p^2 - 4p (n2 = 0)", "2p^(n2+2) - 2p^(n2+1) + 2p (n2 >= 1)"]
                );
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn render_examples() {
        let two_p = SymbolicWeight::from_monomials([Monomial {
            coeff: 2,
            base_exp: 1,
            params: vec![],
        }]);
        assert_eq!(render(&two_p), "2p");
        assert_eq!(render(&SymbolicWeight::zero()), "0");
        let mixed = SymbolicWeight::from_monomials([
            Monomial {
                coeff: -1,
                base_exp: 0,
                params: vec![ParamId(1)],
            },
            Monomial {
                coeff: 1,
                base_exp: 3,
                params: vec![ParamId(2), ParamId(1)],
            },
            Monomial {
                coeff: 5,
                base_exp: 0,
                params: vec![],
            },
            Monomial {
                coeff: -5,
                base_exp: 0,
                params: vec![],
            },
        ]);
        assert_eq!(render(&mixed), "p^(n1+n2+3) - p^n1");
        let negative_lead = SymbolicWeight::from_monomials([Monomial {
            coeff: -3,
            base_exp: 2,
            params: vec![],
        }]);
        assert_eq!(render(&negative_lead), "-3p^2");
    }
}
