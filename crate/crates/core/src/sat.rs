//! Positive 1-in-3 clause collections: parsing, exhaustive solving, and the
//! preprocessing that rewrites an arbitrary instance into one where two
//! clauses share at most one variable.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("clause {index}: variable {var:?} repeated")]
    RepeatedVariable { index: usize, var: String },
    #[error("instance has {vars} variables; exhaustive solving is limited to {limit}")]
    TooLarge { vars: usize, limit: usize },
    #[error("clauses {first} and {second} share two variables: {shared:?}")]
    SharedPair {
        first: usize,
        second: usize,
        shared: (String, String),
    },
    #[error("preprocessing did not converge within {0} rewrites")]
    PreprocessDiverged(usize),
    #[error("assignment does not cover variable {0:?}")]
    UnassignedVariable(String),
    #[error("clause {index} ({vars:?}) has {true_count} true variables, expected exactly one")]
    ClauseViolated {
        index: usize,
        vars: [String; 3],
        true_count: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatParseError {
    #[error("line {line}: clause has {got} variables, expected 3")]
    Arity { line: usize, got: usize },
    #[error("line {line}: variable {var:?} repeated within the clause")]
    Repeated { line: usize, var: String },
    #[error("line {line}: unrecognized directive {token:?}")]
    UnknownDirective { line: usize, token: String },
    #[error("line {line}: malformed assignment token {token:?}")]
    BadAssignment { line: usize, token: String },
}

/// One clause over exactly three distinct positive variables. Slot order is
/// the literal order of the source, and is significant downstream.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause([String; 3]);

impl Clause {
    pub fn new(vars: [String; 3]) -> Result<Clause, SatError> {
        for i in 0..3 {
            for j in i + 1..3 {
                if vars[i] == vars[j] {
                    return Err(SatError::RepeatedVariable {
                        index: 0,
                        var: vars[i].clone(),
                    });
                }
            }
        }
        Ok(Clause(vars))
    }

    pub fn vars(&self) -> &[String; 3] {
        &self.0
    }

    pub fn var_set(&self) -> BTreeSet<&str> {
        self.0.iter().map(String::as_str).collect()
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.iter().any(|v| v == var)
    }
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// An ordered collection of positive 3-variable clauses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SatInstance {
    pub clauses: Vec<Clause>,
}

impl SatInstance {
    pub fn new(clauses: Vec<Clause>) -> SatInstance {
        SatInstance { clauses }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.clauses
            .iter()
            .flat_map(|c| c.vars().iter().cloned())
            .collect()
    }

    /// Checks that any two distinct clauses share at most one variable.
    pub fn validate_min_intersecting(&self) -> Result<(), SatError> {
        for i in 0..self.clauses.len() {
            for j in i + 1..self.clauses.len() {
                let shared: Vec<&str> = self.clauses[i]
                    .var_set()
                    .intersection(&self.clauses[j].var_set())
                    .copied()
                    .collect();
                if shared.len() >= 2 {
                    return Err(SatError::SharedPair {
                        first: i,
                        second: j,
                        shared: (shared[0].to_string(), shared[1].to_string()),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_min_intersecting(&self) -> bool {
        self.validate_min_intersecting().is_ok()
    }
}

impl std::fmt::Display for SatInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.clauses {
            writeln!(f, "c {} {} {}", c.vars()[0], c.vars()[1], c.vars()[2])?;
        }
        Ok(())
    }
}

/// Parses the clause file format: one `c <var> <var> <var>` line per clause,
/// `#` comments, blank lines ignored.
pub fn parse_instance(text: &str) -> Result<SatInstance, SatParseError> {
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let head = tokens.next().expect("nonempty line has a token");
        if head != "c" {
            return Err(SatParseError::UnknownDirective {
                line,
                token: head.to_string(),
            });
        }
        let vars: Vec<String> = tokens.map(str::to_string).collect();
        if vars.len() != 3 {
            return Err(SatParseError::Arity {
                line,
                got: vars.len(),
            });
        }
        let arr = [vars[0].clone(), vars[1].clone(), vars[2].clone()];
        match Clause::new(arr) {
            Ok(c) => clauses.push(c),
            Err(SatError::RepeatedVariable { var, .. }) => {
                return Err(SatParseError::Repeated { line, var })
            }
            Err(_) => unreachable!("Clause::new only reports repetition"),
        }
    }
    Ok(SatInstance::new(clauses))
}

/// A truth map over variable names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    pub truth: BTreeMap<String, bool>,
}

impl Assignment {
    pub fn get(&self, var: &str) -> Option<bool> {
        self.truth.get(var).copied()
    }

    /// Parses `"x=1,y=0"` (also accepts whitespace separators and
    /// `true`/`false` values).
    pub fn parse(text: &str) -> Result<Assignment, SatParseError> {
        let mut truth = BTreeMap::new();
        for token in text.split([',', ' ', '\n']).filter(|t| !t.trim().is_empty()) {
            let token = token.trim();
            let (var, value) = token.split_once('=').ok_or(SatParseError::BadAssignment {
                line: 1,
                token: token.to_string(),
            })?;
            let value = match value.trim() {
                "1" | "true" | "TRUE" => true,
                "0" | "false" | "FALSE" => false,
                _ => {
                    return Err(SatParseError::BadAssignment {
                        line: 1,
                        token: token.to_string(),
                    })
                }
            };
            truth.insert(var.trim().to_string(), value);
        }
        Ok(Assignment { truth })
    }

    /// Ok exactly when every clause has exactly one true variable under this
    /// assignment; the error names the first violated clause.
    pub fn satisfies(&self, instance: &SatInstance) -> Result<(), SatError> {
        for (index, clause) in instance.clauses.iter().enumerate() {
            let mut true_count = 0;
            for v in clause.vars() {
                match self.get(v) {
                    Some(true) => true_count += 1,
                    Some(false) => {}
                    None => return Err(SatError::UnassignedVariable(v.clone())),
                }
            }
            if true_count != 1 {
                return Err(SatError::ClauseViolated {
                    index,
                    vars: clause.vars().clone(),
                    true_count,
                });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .truth
            .iter()
            .map(|(v, t)| format!("{v}={}", if *t { 1 } else { 0 }))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

const SOLVE_VAR_LIMIT: usize = 24;

/// First satisfying assignment in lexicographic order (variables ascending,
/// TRUE tried before FALSE), or `None` when unsatisfiable. Exhaustive with
/// clause pruning; refuses instances above the desk-scale variable limit.
pub fn solve_one_in_three(instance: &SatInstance) -> Result<Option<Assignment>, SatError> {
    let mut solutions = enumerate_solutions(instance, Some(1))?;
    Ok(solutions.pop())
}

/// Every satisfying assignment, in the same lexicographic order.
pub fn one_in_three_solutions(instance: &SatInstance) -> Result<Vec<Assignment>, SatError> {
    enumerate_solutions(instance, None)
}

fn enumerate_solutions(
    instance: &SatInstance,
    limit: Option<usize>,
) -> Result<Vec<Assignment>, SatError> {
    let vars: Vec<String> = instance.variables().into_iter().collect();
    if vars.len() > SOLVE_VAR_LIMIT {
        return Err(SatError::TooLarge {
            vars: vars.len(),
            limit: SOLVE_VAR_LIMIT,
        });
    }
    let var_index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let clause_vars: Vec<[usize; 3]> = instance
        .clauses
        .iter()
        .map(|c| {
            let v = c.vars();
            [
                var_index[v[0].as_str()],
                var_index[v[1].as_str()],
                var_index[v[2].as_str()],
            ]
        })
        .collect();

    let mut values = vec![None::<bool>; vars.len()];
    let mut out = Vec::new();
    dfs(0, &vars, &clause_vars, &mut values, &mut out, limit);
    Ok(out)
}

fn feasible(clause_vars: &[[usize; 3]], values: &[Option<bool>]) -> bool {
    for c in clause_vars {
        let mut true_count = 0;
        let mut unset = 0;
        for &v in c {
            match values[v] {
                Some(true) => true_count += 1,
                Some(false) => {}
                None => unset += 1,
            }
        }
        if true_count > 1 || true_count + unset < 1 {
            return false;
        }
    }
    true
}

/// Returns true when the enumeration limit has been reached.
fn dfs(
    pos: usize,
    vars: &[String],
    clause_vars: &[[usize; 3]],
    values: &mut Vec<Option<bool>>,
    out: &mut Vec<Assignment>,
    limit: Option<usize>,
) -> bool {
    if pos == vars.len() {
        let truth = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), values[i].unwrap()))
            .collect();
        out.push(Assignment { truth });
        return limit.is_some_and(|l| out.len() >= l);
    }
    for value in [true, false] {
        values[pos] = Some(value);
        let stop = feasible(clause_vars, values)
            && dfs(pos + 1, vars, clause_vars, values, out, limit);
        values[pos] = None;
        if stop {
            return true;
        }
    }
    false
}

/// One step of the rewrite log produced by [`minimize_intersections`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum RewriteStep {
    /// Two clauses shared two variables; the second clause's remaining
    /// variable was renamed to the first's and the second clause dropped.
    Substituted { replaced: String, by: String },
    /// A clause duplicated another as a set and was dropped.
    DroppedDuplicate { clause: [String; 3] },
    /// A substitution collapsed a clause to two copies of one variable plus
    /// another; that shape pins both truth values, so the clause is replaced
    /// by a gadget forcing `false_var` FALSE and `true_var` TRUE.
    ForcedPair { false_var: String, true_var: String },
    /// A substitution collapsed a clause to three copies of one variable,
    /// which no assignment can satisfy; the whole instance was replaced by a
    /// fixed unsatisfiable core.
    ReplacedByUnsatCore { var: String },
}

impl std::fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RewriteStep::Substituted { replaced, by } => write!(f, "rename {replaced} -> {by}"),
            RewriteStep::DroppedDuplicate { clause } => write!(
                f,
                "drop duplicate clause ({}, {}, {})",
                clause[0], clause[1], clause[2]
            ),
            RewriteStep::ForcedPair {
                false_var,
                true_var,
            } => write!(f, "force {false_var}=0, {true_var}=1 via gadget"),
            RewriteStep::ReplacedByUnsatCore { var } => write!(
                f,
                "collapsed clause on {var} is unsatisfiable; instance replaced by unsat core"
            ),
        }
    }
}

const REWRITE_CAP: usize = 10_000;

/// Rewrites `instance` until any two clauses share at most one variable,
/// preserving exactly-one satisfiability.
///
/// The basic step: when clauses `(x,y,z)` and `(x,y,u)` share two variables,
/// `z` and `u` must agree, so `u` is renamed to `z` everywhere and the second
/// clause dropped. Renaming can collapse a third clause that contained both
/// `z` and `u` into a repeated-variable shape; such a clause pins its
/// variables (`(z,z,w)` forces `z` FALSE and `w` TRUE) and is replaced by an
/// equivalent min-intersecting forcing gadget over fresh variables. A clause
/// collapsing to `(z,z,z)` is unsatisfiable outright and replaces the whole
/// instance with a fixed unsatisfiable core.
pub fn minimize_intersections(
    instance: &SatInstance,
) -> Result<(SatInstance, Vec<RewriteStep>), SatError> {
    let mut clauses: Vec<[String; 3]> =
        instance.clauses.iter().map(|c| c.vars().clone()).collect();
    let mut log = Vec::new();
    let mut fresh = FreshVars::new(instance);

    for _ in 0..REWRITE_CAP {
        if !rewrite_once(&mut clauses, &mut log, &mut fresh) {
            let clauses = clauses
                .into_iter()
                .map(|vars| Clause::new(vars).expect("rewrite output has distinct variables"))
                .collect();
            let result = SatInstance::new(clauses);
            debug_assert!(result.is_min_intersecting());
            return Ok((result, log));
        }
    }
    Err(SatError::PreprocessDiverged(REWRITE_CAP))
}

/// Applies one rewrite; false at fixpoint.
fn rewrite_once(
    clauses: &mut Vec<[String; 3]>,
    log: &mut Vec<RewriteStep>,
    fresh: &mut FreshVars,
) -> bool {
    // repeated-variable clauses first: they pin truth values
    for i in 0..clauses.len() {
        let c = clauses[i].clone();
        if c[0] == c[1] && c[1] == c[2] {
            let var = c[0].clone();
            *clauses = unsat_core(fresh);
            log.push(RewriteStep::ReplacedByUnsatCore { var });
            return true;
        }
        if let Some((dup, single)) = repeated_pair(&c) {
            clauses.remove(i);
            match fresh.forcing_gadget(&dup, &single) {
                Some(gadget) => {
                    clauses.extend(gadget);
                    log.push(RewriteStep::ForcedPair {
                        false_var: dup,
                        true_var: single,
                    });
                }
                None => {
                    // the collapsed clause pins TRUE a variable some earlier
                    // gadget already pinned FALSE
                    *clauses = unsat_core(fresh);
                    log.push(RewriteStep::ReplacedByUnsatCore { var: single });
                }
            }
            return true;
        }
    }
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            let si: BTreeSet<&String> = clauses[i].iter().collect();
            let sj: BTreeSet<&String> = clauses[j].iter().collect();
            let shared: Vec<String> = si.intersection(&sj).map(|s| (*s).clone()).collect();
            match shared.len() {
                3 => {
                    let clause = clauses.remove(j);
                    log.push(RewriteStep::DroppedDuplicate { clause });
                    return true;
                }
                2 => {
                    let keep = clauses[i]
                        .iter()
                        .find(|v| !shared.contains(v))
                        .expect("third variable exists")
                        .clone();
                    let drop = clauses[j]
                        .iter()
                        .find(|v| !shared.contains(v))
                        .expect("third variable exists")
                        .clone();
                    clauses.remove(j);
                    for c in clauses.iter_mut() {
                        for v in c.iter_mut() {
                            if *v == drop {
                                *v = keep.clone();
                            }
                        }
                    }
                    fresh.rename(&drop, &keep);
                    log.push(RewriteStep::Substituted {
                        replaced: drop,
                        by: keep,
                    });
                    return true;
                }
                _ => {}
            }
        }
    }
    false
}

/// `(z,z,w)` up to order: returns (repeated, single).
fn repeated_pair(c: &[String; 3]) -> Option<(String, String)> {
    for (a, b, other) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if c[a] == c[b] && c[a] != c[other] {
            return Some((c[a].clone(), c[other].clone()));
        }
    }
    None
}

/// A fixed minimum-intersecting instance with no exactly-one assignment: the
/// force-FALSE shape plus a second cross clause over the opposite
/// companions, which needs the pair sums to total one both ways at once.
fn unsat_core(fresh: &mut FreshVars) -> Vec<[String; 3]> {
    let [z, a, b, c, d, e, f] = std::array::from_fn(|_| fresh.next());
    vec![
        [z.clone(), a.clone(), b.clone()],
        [z.clone(), c.clone(), d.clone()],
        [z.clone(), e.clone(), f.clone()],
        [a, c, e],
        [b, d, f],
    ]
}

struct FreshVars {
    used: BTreeSet<String>,
    counter: usize,
    /// Variables already pinned FALSE by an emitted gadget; reused.
    forced_false: BTreeSet<String>,
}

impl FreshVars {
    fn new(instance: &SatInstance) -> FreshVars {
        FreshVars {
            used: instance.variables(),
            counter: 0,
            forced_false: BTreeSet::new(),
        }
    }

    fn next(&mut self) -> String {
        loop {
            let candidate = format!("_m{}", self.counter);
            self.counter += 1;
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                return candidate;
            }
        }
    }

    /// Keeps the forcing bookkeeping in step when a substitution renames a
    /// pinned variable.
    fn rename(&mut self, from: &str, to: &str) {
        if self.forced_false.remove(from) {
            self.forced_false.insert(to.to_string());
        }
    }

    /// Clauses forcing `z` FALSE in every satisfying assignment while
    /// staying satisfiable and pairwise sharing at most one variable: three
    /// disjoint companion pairs hang off `z`, and one clause across the
    /// pairs rules out `z`=TRUE (it would force all six companions FALSE
    /// and leave that clause empty). Emitted once per variable.
    fn force_false(&mut self, z: &str) -> Vec<[String; 3]> {
        if !self.forced_false.insert(z.to_string()) {
            return Vec::new();
        }
        let [a, b, c, d, e, f] = std::array::from_fn(|_| self.next());
        vec![
            [z.into(), a.clone(), b.clone()],
            [z.into(), c.clone(), d.clone()],
            [z.into(), e.clone(), f.clone()],
            [a, c, e],
        ]
    }

    /// Replacement for a collapsed clause `(z,z,w)`: force `z` FALSE, then
    /// pin `w` TRUE with a clause whose other two variables are distinct
    /// forced-FALSE ones. `None` signals that `w` is itself already pinned
    /// FALSE, so the instance is unsatisfiable.
    fn forcing_gadget(&mut self, z: &str, w: &str) -> Option<Vec<[String; 3]>> {
        if self.forced_false.contains(w) {
            return None;
        }
        let mut out = self.force_false(z);
        let companion = match self
            .forced_false
            .iter()
            .find(|v| *v != z && *v != w)
            .cloned()
        {
            Some(c) => c,
            None => {
                let c = self.next();
                out.extend(self.force_false(&c));
                c
            }
        };
        out.push([w.into(), z.into(), companion]);
        Some(out)
    }
}
