//! Exact feasibility of a [`PhiSystem`].
//!
//! Equalities are brought to reduced row echelon form by sparse Gaussian
//! elimination; the inequalities, rewritten in the free unknowns, go to a
//! phase-one simplex with Bland's rule. Infeasibility is reported as a
//! Farkas combination of the original constraints, re-checked exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::system::{constraint_json, PhiSystem, Relation};
use super::PhiError;
use crate::algebra::Rational;

type Row = BTreeMap<usize, Rational>;

/// Multipliers for the constraints of a system (nonnegative on
/// inequalities) whose combination has no unknowns left and a positive
/// constant: `0 < Σ m_k expr_k <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: BTreeMap<usize, Rational>,
}

impl FarkasCertificate {
    /// The combined constant, or `None` when the combination is not a
    /// valid contradiction for `system`.
    pub fn check(&self, system: &PhiSystem) -> Option<Rational> {
        let cs = system.constraints();
        let mut coeffs: Row = BTreeMap::new();
        let mut constant = Rational::zero();
        for (&k, m) in &self.multipliers {
            let c = cs.get(k)?;
            if c.relation == Relation::Le && m.is_negative() {
                return None;
            }
            for (&i, a) in &c.coeffs {
                *coeffs.entry(i).or_insert_with(Rational::zero) += m * a;
            }
            constant += m * &c.constant;
        }
        (coeffs.values().all(|v| v.is_zero()) && constant.is_positive()).then_some(constant)
    }

    pub fn verify(&self, system: &PhiSystem) -> bool {
        self.check(system).is_some()
    }

    /// The combined constraints with their multipliers, in the system's
    /// JSON row format.
    pub fn to_json(&self, system: &PhiSystem) -> Value {
        let rows: Vec<Value> = self
            .multipliers
            .iter()
            .map(|(&k, m)| {
                let mut v = constraint_json(&system.constraints()[k], Some(m));
                v["constraint"] = json!(k);
                v
            })
            .collect();
        json!({
            "combined_constant": self.check(system).map(|c| c.to_string()),
            "rows": rows,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// An exact solution satisfying every constraint.
    Feasible { solution: Vec<Rational> },
    Infeasible { certificate: FarkasCertificate },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

fn axpy(target: &mut Row, factor: &Rational, source: &Row) {
    for (&j, v) in source {
        let e = target.entry(j).or_insert_with(Rational::zero);
        *e -= factor * v;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

struct Pivot {
    col: usize,
    /// Coefficients with the pivot normalized to 1 (pivot column included).
    row: Row,
    constant: Rational,
    combo: Row,
}

/// Reduced row echelon form of the equalities.
struct Echelon {
    pivots: Vec<Pivot>,
    pivot_of: HashMap<usize, usize>,
    /// Free column -> pivot rows that contain it.
    occurs: HashMap<usize, BTreeSet<usize>>,
    track: bool,
}

enum Reduced {
    Zero { constant: Rational, combo: Row },
    Rest { row: Row, constant: Rational, combo: Row },
}

impl Echelon {
    fn new(track: bool) -> Self {
        Echelon { pivots: Vec::new(), pivot_of: HashMap::new(), occurs: HashMap::new(), track }
    }

    /// Eliminates every pivot column from the row.
    fn reduce(&self, mut row: Row, mut constant: Rational, mut combo: Row) -> Reduced {
        let cols: Vec<usize> = row.keys().filter(|c| self.pivot_of.contains_key(c)).copied().collect();
        for c in cols {
            let Some(f) = row.get(&c).cloned() else { continue };
            let p = &self.pivots[self.pivot_of[&c]];
            axpy(&mut row, &f, &p.row);
            constant -= &f * &p.constant;
            if self.track {
                axpy(&mut combo, &f, &p.combo);
            }
        }
        if row.is_empty() {
            Reduced::Zero { constant, combo }
        } else {
            Reduced::Rest { row, constant, combo }
        }
    }

    /// Adds a reduced, nonzero row as a new pivot.
    fn insert(&mut self, mut row: Row, mut constant: Rational, mut combo: Row) {
        let col = *row
            .keys()
            .min_by_key(|c| (self.occurs.get(c).map_or(0, |s| s.len()), std::cmp::Reverse(**c)))
            .expect("nonzero row");
        let inv = row[&col].recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        constant *= &inv;
        if self.track {
            for v in combo.values_mut() {
                *v *= &inv;
            }
        }
        let users: Vec<usize> = self.occurs.remove(&col).map(|s| s.into_iter().collect()).unwrap_or_default();
        for u in users {
            let f = self.pivots[u].row[&col].clone();
            let before: BTreeSet<usize> = self.pivots[u].row.keys().copied().collect();
            let p = &mut self.pivots[u];
            axpy(&mut p.row, &f, &row);
            p.constant -= &f * &constant;
            if self.track {
                axpy(&mut p.combo, &f, &combo);
            }
            let pc = p.col;
            let after: BTreeSet<usize> = p.row.keys().copied().collect();
            for c in before.difference(&after) {
                if let Some(s) = self.occurs.get_mut(c) {
                    s.remove(&u);
                }
            }
            for &c in after.difference(&before) {
                if c != pc {
                    self.occurs.entry(c).or_default().insert(u);
                }
            }
        }
        let id = self.pivots.len();
        for &c in row.keys() {
            if c != col {
                self.occurs.entry(c).or_default().insert(id);
            }
        }
        self.pivot_of.insert(col, id);
        self.pivots.push(Pivot { col, row, constant, combo });
    }
}

enum Elimination {
    Contradiction(Row, Rational),
    Done(Echelon),
}

fn eliminate(system: &PhiSystem, track: bool) -> Elimination {
    let mut ech = Echelon::new(track);
    for (k, c) in system.constraints().iter().enumerate() {
        if c.relation != Relation::Eq {
            continue;
        }
        let combo = if track { BTreeMap::from([(k, Rational::one())]) } else { Row::new() };
        match ech.reduce(c.coeffs.clone(), c.constant.clone(), combo) {
            Reduced::Zero { constant, combo } => {
                if !constant.is_zero() {
                    return Elimination::Contradiction(combo, constant);
                }
            }
            Reduced::Rest { row, constant, combo } => ech.insert(row, constant, combo),
        }
    }
    Elimination::Done(ech)
}

/// Decides feasibility exactly. Free unknowns default to the length
/// function when the system has one, so a system satisfied by `Φ = |w|`
/// returns exactly that solution.
pub fn check_feasible(system: &PhiSystem) -> Result<Feasibility, PhiError> {
    let ech = match eliminate(system, false) {
        Elimination::Done(e) => e,
        Elimination::Contradiction(..) => return infeasible_from_equalities(system),
    };
    let n = system.unknowns().len();
    let hint = system.length_assignment().unwrap_or_else(|| vec![Rational::zero(); n]);
    // inequalities in the free unknowns
    let mut ineq: Vec<(usize, Row, Rational, Row)> = Vec::new();
    for (k, c) in system.constraints().iter().enumerate() {
        if c.relation != Relation::Le {
            continue;
        }
        let (row, constant, combo) = match ech.reduce(c.coeffs.clone(), c.constant.clone(), Row::new()) {
            Reduced::Zero { constant, combo } => (Row::new(), constant, combo),
            Reduced::Rest { row, constant, combo } => (row, constant, combo),
        };
        ineq.push((k, row, constant, combo));
    }
    let mut x = hint;
    if !ineq.is_empty() {
        let rows: Vec<(Row, Rational)> = ineq.iter().map(|(_, r, c, _)| (r.clone(), c.clone())).collect();
        match phase_one(&rows, &x) {
            Lp::Feasible(values) => {
                for (j, v) in values {
                    x[j] = v;
                }
            }
            Lp::Infeasible(_) => return infeasible_with_inequalities(system),
        }
    }
    for p in &ech.pivots {
        let mut v = -p.constant.clone();
        for (&j, a) in &p.row {
            if j != p.col {
                v -= a * &x[j];
            }
        }
        x[p.col] = v;
    }
    if !system.satisfied_by(&x) {
        return Err(PhiError::Internal("solution fails re-substitution".into()));
    }
    Ok(Feasibility::Feasible { solution: x })
}

fn certificate(system: &PhiSystem, multipliers: Row) -> Result<Feasibility, PhiError> {
    let certificate = FarkasCertificate { multipliers };
    if !certificate.verify(system) {
        return Err(PhiError::Internal("Farkas certificate fails re-substitution".into()));
    }
    Ok(Feasibility::Infeasible { certificate })
}

fn infeasible_from_equalities(system: &PhiSystem) -> Result<Feasibility, PhiError> {
    let Elimination::Contradiction(mut combo, constant) = eliminate(system, true) else {
        return Err(PhiError::Internal("elimination is not deterministic".into()));
    };
    if constant.is_negative() {
        for v in combo.values_mut() {
            *v = -v.clone();
        }
    }
    certificate(system, combo)
}

fn infeasible_with_inequalities(system: &PhiSystem) -> Result<Feasibility, PhiError> {
    let Elimination::Done(ech) = eliminate(system, true) else {
        return Err(PhiError::Internal("elimination is not deterministic".into()));
    };
    let mut rows = Vec::new();
    let mut combos = Vec::new();
    for (k, c) in system.constraints().iter().enumerate() {
        if c.relation != Relation::Le {
            continue;
        }
        let combo = BTreeMap::from([(k, Rational::one())]);
        let (row, constant, combo) = match ech.reduce(c.coeffs.clone(), c.constant.clone(), combo) {
            Reduced::Zero { constant, combo } => (Row::new(), constant, combo),
            Reduced::Rest { row, constant, combo } => (row, constant, combo),
        };
        rows.push((row, constant));
        combos.push(combo);
    }
    let zero = vec![Rational::zero(); system.unknowns().len()];
    let Lp::Infeasible(lambda) = phase_one(&rows, &zero) else {
        return Err(PhiError::Internal("phase one is not deterministic".into()));
    };
    let mut total = Row::new();
    for (l, combo) in lambda.iter().zip(&combos) {
        if l.is_zero() {
            continue;
        }
        axpy(&mut total, &-l.clone(), combo);
    }
    certificate(system, total)
}

enum Lp {
    /// Values for the free columns that occur in the rows.
    Feasible(Vec<(usize, Rational)>),
    /// Nonnegative row multipliers `λ` with `Σ λ_i row_i = 0` and
    /// `Σ λ_i constant_i > 0`.
    Infeasible(Vec<Rational>),
}

/// Phase one for `row_i · z + constant_i <= 0` over free `z`, shifted to
/// start at `start` (so an already feasible start is kept).
fn phase_one(rows: &[(Row, Rational)], start: &[Rational]) -> Lp {
    let cols: Vec<usize> = rows.iter().flat_map(|(r, _)| r.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let m = rows.len();
    let nz = cols.len();
    // columns: y+ (nz), y- (nz), slack (m), artificial (m); z = start + y+ - y-
    let width = 2 * nz + 2 * m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut sigma: Vec<Rational> = Vec::with_capacity(m);
    for (i, (row, constant)) in rows.iter().enumerate() {
        // row·y + s = -(constant + row·start)
        let mut e = -constant.clone();
        for (j, a) in row {
            e -= a * &start[*j];
        }
        let s = if e.is_negative() { -Rational::one() } else { Rational::one() };
        let mut line = vec![Rational::zero(); width];
        for (ci, c) in cols.iter().enumerate() {
            if let Some(a) = row.get(c) {
                line[ci] = &s * a;
                line[nz + ci] = -(&s * a);
            }
        }
        line[2 * nz + i] = s.clone();
        line[2 * nz + m + i] = Rational::one();
        rhs.push(&s * &e);
        sigma.push(s);
        t.push(line);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * nz + m + i).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut rc = vec![Rational::zero(); width];
    for line in &t {
        for j in 0..2 * nz + m {
            rc[j] -= &line[j];
        }
    }
    while let Some(enter) = (0..width).find(|&j| rc[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one is bounded");
        let inv = t[r][enter].recip();
        for v in t[r].iter_mut() {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        let prow = t[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    if !prow[j].is_zero() {
                        let d = &f * &prow[j];
                        t[i][j] -= d;
                    }
                }
                rhs[i] -= &f * &prhs;
            }
        }
        let f = rc[enter].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                rc[j] -= &f * &prow[j];
            }
        }
        basis[r] = enter;
    }
    let objective: Rational = (0..m)
        .filter(|&i| basis[i] >= 2 * nz + m)
        .fold(Rational::zero(), |acc, i| acc + &rhs[i]);
    if objective.is_positive() {
        // y_i = 1 - rc(artificial_i), λ_i = -y_i σ_i
        let lambda = (0..m)
            .map(|i| -((Rational::one() - &rc[2 * nz + m + i]) * &sigma[i]))
            .collect();
        return Lp::Infeasible(lambda);
    }
    let mut y = vec![Rational::zero(); 2 * nz];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * nz {
            y[b] = rhs[i].clone();
        }
    }
    Lp::Feasible(
        cols.iter()
            .enumerate()
            .map(|(ci, &c)| (c, &start[c] + &y[ci] - &y[nz + ci]))
            .collect(),
    )
}

/// The value of unknown `id` forced by the equalities alone, if any.
pub fn implied_value(system: &PhiSystem, id: usize) -> Option<Rational> {
    let Elimination::Done(ech) = eliminate(system, false) else { return None };
    let p = &ech.pivots[*ech.pivot_of.get(&id)?];
    (p.row.len() == 1).then(|| -p.constant.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::canon::CanonMode;
    use crate::phi::system::{LinearExpr, RuleTag, WordConstraint};
    use crate::phi::word::{e, SWord};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn word(i: i32) -> SWord {
        SWord((0..i).map(|k| e(1, k + 2)).collect())
    }

    #[test]
    fn empty_system_is_feasible() {
        let s = PhiSystem::new(CanonMode::Automorphism);
        match check_feasible(&s).unwrap() {
            Feasibility::Feasible { solution } => assert_eq!(solution, vec![q(0, 1), q(1, 1)]),
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn contradictory_equalities() {
        let mut s = PhiSystem::new(CanonMode::Syntactic);
        let (a, b) = (word(2), word(3));
        s.add(&WordConstraint::eq(LinearExpr::phi(&a).term(q(-1, 1), b.clone()), RuleTag::Reorder)).unwrap();
        s.add(&WordConstraint::eq(LinearExpr::phi(&a).term(q(-1, 1), b).plus_constant(q(1, 2)), RuleTag::Reorder))
            .unwrap();
        let Feasibility::Infeasible { certificate } = check_feasible(&s).unwrap() else { panic!() };
        assert_eq!(certificate.check(&s), Some(q(1, 2)));
    }

    #[test]
    fn inequalities_and_farkas() {
        let mut s = PhiSystem::new(CanonMode::Syntactic);
        let (a, b) = (word(2), word(3));
        // Φ(a) - Φ(b) <= -1, Φ(b) - Φ(a) <= 0
        s.add(&WordConstraint::le(LinearExpr::phi(&a).term(q(-1, 1), b.clone()).plus_constant(q(1, 1)), RuleTag::Figure1Psd))
            .unwrap();
        let f = check_feasible(&s).unwrap();
        let Feasibility::Feasible { solution } = &f else { panic!() };
        assert!(s.satisfied_by(solution));
        s.add(&WordConstraint::le(LinearExpr::phi(&b).term(q(-1, 1), a.clone()), RuleTag::Figure1Psd)).unwrap();
        let Feasibility::Infeasible { certificate } = check_feasible(&s).unwrap() else { panic!() };
        assert_eq!(certificate.check(&s), Some(q(1, 1)));
        assert!(certificate.multipliers.values().all(|m| !m.is_negative()));
        let js = certificate.to_json(&s);
        assert_eq!(js["combined_constant"], "1");
    }

    #[test]
    fn inequality_through_equalities() {
        // Φ(a) = 3 and Φ(a) <= 2 via the normalization row Φ(E) = 1
        let mut s = PhiSystem::new(CanonMode::Syntactic);
        let a = word(2);
        s.add(&WordConstraint::eq(LinearExpr::phi(&a).term(q(-3, 1), word(1)), RuleTag::StarValue)).unwrap();
        s.add(&WordConstraint::le(LinearExpr::phi(&a).plus_constant(q(-2, 1)), RuleTag::Figure1Psd)).unwrap();
        let Feasibility::Infeasible { certificate } = check_feasible(&s).unwrap() else { panic!() };
        assert!(certificate.verify(&s));
        let mut tampered = certificate.clone();
        for v in tampered.multipliers.values_mut() {
            *v *= q(2, 1);
        }
        tampered.multipliers.insert(0, q(1, 1));
        assert!(!tampered.verify(&s));
        assert_eq!(implied_value(&s, s.lookup(&a).unwrap().unwrap()), Some(q(3, 1)));
    }
}
