//! Exhaustive partition-regularity search over `[1..N]`.
//!
//! `mono_witness` finds the canonical (lexicographically least) witness of
//! a monochromatic image or kernel solution under a fixed coloring;
//! `forced` decides whether every r-coloring of `[1..N]` admits one, by
//! backtracking over colorings with prefix-witness pruning and color
//! symmetry breaking; `export_cnf`/`solve_external` provide the same
//! question as a DIMACS instance for an external SAT solver.

use crate::coloring::{Coloring, ColoringError};
use crate::systems::{LinearSystem, SystemError, SystemMode, VarName};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::process::Command;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("var_bound must be >= 1")]
    BadVarBound,
    #[error("clause count would exceed the cap {cap} (at least {estimate} clauses)")]
    ClauseCapExceeded { cap: usize, estimate: usize },
    #[error("solver failed: {0}")]
    SolverFailed(String),
    #[error("solver model rejected: {0}")]
    ModelInvalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A verified monochromatic witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageWitness {
    pub assignment: BTreeMap<VarName, i64>,
    /// Evaluated rows of the system at the assignment.
    pub image_values: Vec<i64>,
    pub color: usize,
}

impl ImageWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "assignment": self.assignment.iter()
                .map(|(v, x)| (v.to_string(), *x))
                .collect::<BTreeMap<String, i64>>(),
            "image_values": self.image_values,
            "color": self.color,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForcedVerdict {
    /// Every r-coloring of `[1..N]` admits a monochromatic witness.
    Forced,
    /// The canonical avoiding coloring (color of point 1 fixed to 0,
    /// colors first used in increasing order).
    Avoidable(Coloring),
    /// Node budget exhausted before a verdict.
    Unknown { budget: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedResult {
    pub verdict: ForcedVerdict,
    pub stats: SearchStats,
}

/// Per-variable value domain for the witness search.
enum Domain<'a> {
    /// `1..=bound`
    Range(i64),
    /// explicit ascending values
    Set(&'a [i64]),
}

impl Domain<'_> {
    fn contains(&self, v: i64) -> bool {
        match self {
            Domain::Range(b) => 1 <= v && v <= *b,
            Domain::Set(s) => s.binary_search(&v).is_ok(),
        }
    }

    fn iter(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match self {
            Domain::Range(b) => Box::new(1..=*b),
            Domain::Set(s) => Box::new(s.iter().copied()),
        }
    }
}

struct Engine {
    rows: Vec<Vec<i64>>,
    mode: SystemMode,
    n_vars: usize,
    /// rows grouped by the index of their last (highest) variable
    rows_by_last: Vec<Vec<usize>>,
    /// variable indices appearing in each row
    row_vars: Vec<Vec<usize>>,
}

impl Engine {
    fn new(system: &LinearSystem) -> Result<Self, SearchError> {
        let rows = system.dense_rows_i64()?;
        let n_vars = system.variables.len();
        let mut rows_by_last = vec![Vec::new(); n_vars];
        let mut row_vars = Vec::with_capacity(rows.len());
        for (ri, row) in rows.iter().enumerate() {
            let last = row
                .iter()
                .rposition(|c| *c != 0)
                .expect("generated rows are nonempty");
            rows_by_last[last].push(ri);
            row_vars.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(j, _)| j)
                    .collect(),
            );
        }
        Ok(Self {
            rows,
            mode: system.mode,
            n_vars,
            rows_by_last,
            row_vars,
        })
    }

    fn row_value(&self, ri: usize, assignment: &[i64]) -> i64 {
        self.rows[ri]
            .iter()
            .zip(assignment.iter())
            .map(|(c, v)| c * v)
            .sum()
    }
}

/// Constraint context for one search: either a fixed coloring that every
/// monochromatic point must respect, or none (plain enumeration).
struct Constraints<'a> {
    coloring: Option<&'a Coloring>,
    /// window bound for monochromatic points ([1..N])
    n: i64,
}

impl Constraints<'_> {
    /// Check a point that must be monochromatic; returns its color class
    /// or None if inadmissible.
    fn admit(&self, v: i64, current: Option<usize>) -> Option<Option<usize>> {
        if v < 1 || v > self.n {
            return None;
        }
        match self.coloring {
            None => Some(current),
            Some(col) => {
                let c = col.color(v).ok()?;
                match current {
                    None => Some(Some(c)),
                    Some(cur) if cur == c => Some(current),
                    Some(_) => None,
                }
            }
        }
    }
}

/// Depth-first search over assignments in canonical variable order with
/// ascending values; in kernel mode, a completed equation with a unit
/// coefficient on the current variable pins its value instead of
/// enumerating. Calls `on_witness` for every complete valid assignment;
/// stops when it returns true.
fn dfs(
    engine: &Engine,
    constraints: &Constraints<'_>,
    domain: &Domain<'_>,
    depth: usize,
    assignment: &mut Vec<i64>,
    color: Option<usize>,
    nodes: &mut u64,
    on_witness: &mut dyn FnMut(&[i64], Option<usize>) -> bool,
) -> bool {
    if depth == engine.n_vars {
        return on_witness(assignment, color);
    }
    *nodes += 1;

    let check_value = |v: i64, assignment: &mut Vec<i64>, color: Option<usize>| -> Option<Option<usize>> {
        assignment.push(v);
        let mut color = color;
        // the variable itself is a monochromatic point in kernel mode
        if engine.mode == SystemMode::Kernel {
            match constraints.admit(v, color) {
                Some(c) => color = c,
                None => {
                    assignment.pop();
                    return None;
                }
            }
        }
        for &ri in &engine.rows_by_last[depth] {
            let value = engine.row_value(ri, assignment);
            match engine.mode {
                SystemMode::Kernel => {
                    if value != 0 {
                        assignment.pop();
                        return None;
                    }
                }
                SystemMode::Image => match constraints.admit(value, color) {
                    Some(c) => color = c,
                    None => {
                        assignment.pop();
                        return None;
                    }
                },
            }
        }
        // kernel lookahead: a row with exactly one unassigned variable of
        // unit coefficient already pins that value; prune now if it cannot
        // be admitted later.
        if engine.mode == SystemMode::Kernel {
            for (ri, vars) in engine.row_vars.iter().enumerate() {
                let mut pending = None;
                for &vi in vars.iter().rev() {
                    if vi <= depth {
                        break;
                    }
                    if pending.replace(vi).is_some() {
                        pending = None;
                        break;
                    }
                }
                if let Some(vi) = pending {
                    let coeff = engine.rows[ri][vi];
                    if coeff.abs() != 1 {
                        continue;
                    }
                    let partial: i64 = engine.rows[ri][..=depth]
                        .iter()
                        .zip(assignment.iter())
                        .map(|(c, v)| c * v)
                        .sum();
                    let forced = -partial / coeff;
                    if !domain.contains(forced) || constraints.admit(forced, color).is_none() {
                        assignment.pop();
                        return None;
                    }
                }
            }
        }
        Some(color)
    };

    // kernel mode: a completing unit row determines this variable
    if engine.mode == SystemMode::Kernel {
        let unit_row = engine.rows_by_last[depth]
            .iter()
            .find(|&&ri| engine.rows[ri][depth].abs() == 1);
        if let Some(&ri) = unit_row {
            let coeff = engine.rows[ri][depth];
            let partial: i64 = engine.rows[ri][..depth]
                .iter()
                .zip(assignment.iter())
                .map(|(c, v)| c * v)
                .sum();
            let v = -partial / coeff; // coeff is +-1
            if !domain.contains(v) {
                return false;
            }
            if let Some(new_color) = check_value(v, assignment, color) {
                if dfs(
                    engine,
                    constraints,
                    domain,
                    depth + 1,
                    assignment,
                    new_color,
                    nodes,
                    on_witness,
                ) {
                    return true;
                }
                assignment.pop();
            }
            return false;
        }
    }

    for v in domain.iter() {
        if let Some(new_color) = check_value(v, assignment, color) {
            if dfs(
                engine,
                constraints,
                domain,
                depth + 1,
                assignment,
                new_color,
                nodes,
                on_witness,
            ) {
                return true;
            }
            assignment.pop();
        }
    }
    false
}

fn build_witness(
    system: &LinearSystem,
    engine: &Engine,
    assignment: &[i64],
    color: Option<usize>,
) -> ImageWitness {
    let image_values = (0..engine.rows.len())
        .map(|ri| engine.row_value(ri, assignment))
        .collect();
    ImageWitness {
        assignment: system
            .variables
            .iter()
            .zip(assignment.iter())
            .map(|(v, x)| (*v, *x))
            .collect(),
        image_values,
        color: color.unwrap_or(0),
    }
}

fn witness_with_domain(
    system: &LinearSystem,
    coloring: &Coloring,
    domain: &Domain<'_>,
) -> Result<Option<ImageWitness>, SearchError> {
    let engine = Engine::new(system)?;
    let constraints = Constraints {
        coloring: Some(coloring),
        n: coloring.n() as i64,
    };
    let mut found = None;
    let mut nodes = 0u64;
    let mut assignment = Vec::with_capacity(engine.n_vars);
    dfs(
        &engine,
        &constraints,
        domain,
        0,
        &mut assignment,
        None,
        &mut nodes,
        &mut |a, c| {
            found = Some(build_witness(system, &engine, a, c));
            true
        },
    );
    Ok(found)
}

/// Canonical monochromatic witness under `coloring`, with all variables in
/// `[1..var_bound]`, or None.
///
/// ```
/// use rado::coloring::Coloring;
/// use rado::search::{classic, mono_witness};
///
/// // color 1..4 as 0,1,1,0: the known Schur-avoiding pattern
/// let c = Coloring::new(2, vec![0, 1, 1, 0]).unwrap();
/// assert!(mono_witness(&classic::schur_image(), &c, 4).unwrap().is_none());
/// ```
pub fn mono_witness(
    system: &LinearSystem,
    coloring: &Coloring,
    var_bound: usize,
) -> Result<Option<ImageWitness>, SearchError> {
    if var_bound < 1 {
        return Err(SearchError::BadVarBound);
    }
    witness_with_domain(system, coloring, &Domain::Range(var_bound as i64))
}

/// Like [`mono_witness`], but variable values are restricted to an explicit
/// ascending set (e.g. a progression).
pub fn mono_witness_in(
    system: &LinearSystem,
    coloring: &Coloring,
    allowed: &[i64],
) -> Result<Option<ImageWitness>, SearchError> {
    debug_assert!(allowed.windows(2).all(|w| w[0] < w[1]));
    witness_with_domain(system, coloring, &Domain::Set(allowed))
}

/// Decide whether every r-coloring of `[1..N]` admits a monochromatic
/// witness with variables in `[1..var_bound]`.
pub fn forced(
    system: &LinearSystem,
    r: usize,
    n: usize,
    var_bound: usize,
    node_budget: u64,
) -> Result<ForcedResult, SearchError> {
    if var_bound < 1 {
        return Err(SearchError::BadVarBound);
    }
    let mut stats = SearchStats::default();
    let mut colors: Vec<u8> = Vec::with_capacity(n);

    enum Outcome {
        AllForced,
        Avoiding(Vec<u8>),
        Budget,
    }

    fn rec(
        system: &LinearSystem,
        r: usize,
        n: usize,
        var_bound: usize,
        colors: &mut Vec<u8>,
        stats: &mut SearchStats,
        budget: u64,
    ) -> Result<Outcome, SearchError> {
        stats.nodes += 1;
        if stats.nodes > budget {
            return Ok(Outcome::Budget);
        }
        let k = colors.len();
        if k > 0 {
            // a witness inside the colored prefix kills every extension
            let prefix = Coloring::new(r, colors.clone())?;
            if mono_witness(system, &prefix, var_bound)?.is_some() {
                return Ok(Outcome::AllForced);
            }
        }
        if k == n {
            return Ok(Outcome::Avoiding(colors.clone()));
        }
        // symmetry breaking: colors first used in increasing order
        let max_used = colors.iter().copied().max().map(|c| c as usize);
        let color_limit = match max_used {
            None => 0, // point 1 is always color 0
            Some(m) => (m + 1).min(r - 1),
        };
        for c in 0..=color_limit {
            colors.push(c as u8);
            match rec(system, r, n, var_bound, colors, stats, budget)? {
                Outcome::AllForced => {}
                other => {
                    colors.pop();
                    return Ok(other);
                }
            }
            colors.pop();
        }
        Ok(Outcome::AllForced)
    }

    let outcome = rec(
        system,
        r,
        n,
        var_bound,
        &mut colors,
        &mut stats,
        node_budget,
    )?;
    let verdict = match outcome {
        Outcome::AllForced => ForcedVerdict::Forced,
        Outcome::Avoiding(colors) => ForcedVerdict::Avoidable(Coloring::new(r, colors)?),
        Outcome::Budget => ForcedVerdict::Unknown {
            budget: node_budget,
        },
    };
    Ok(ForcedResult { verdict, stats })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinForcing {
    Found(usize),
    /// No N up to the cap forces; the largest avoidable N is reported.
    NotWithin(usize),
    /// Some instance hit the node budget; no reliable answer.
    Unknown { at_n: usize },
}

/// Least `N <= n_max` with a forced verdict.
///
/// ```
/// use rado::search::{classic, min_forcing_n, MinForcing};
///
/// let schur = min_forcing_n(&classic::schur_image(), 2, 12, 12, 10_000_000).unwrap();
/// assert_eq!(schur, MinForcing::Found(5)); // the Schur number for 2 colors
///
/// let ap3 = min_forcing_n(&classic::ap3_image(), 2, 12, 12, 10_000_000).unwrap();
/// assert_eq!(ap3, MinForcing::Found(9)); // the van der Waerden number W(3, 2)
/// ```
pub fn min_forcing_n(
    system: &LinearSystem,
    r: usize,
    n_max: usize,
    var_bound: usize,
    node_budget: u64,
) -> Result<MinForcing, SearchError> {
    for n in 1..=n_max {
        match forced(system, r, n, var_bound, node_budget)?.verdict {
            ForcedVerdict::Forced => return Ok(MinForcing::Found(n)),
            ForcedVerdict::Avoidable(_) => {}
            ForcedVerdict::Unknown { .. } => return Ok(MinForcing::Unknown { at_n: n }),
        }
    }
    Ok(MinForcing::NotWithin(n_max))
}

/// A propositional encoding of "some r-coloring of `[1..N]` avoids every
/// monochromatic witness". Satisfiable iff an avoiding coloring exists.
#[derive(Debug, Clone)]
pub struct CnfDocument {
    pub r: usize,
    pub n: usize,
    pub n_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfDocument {
    /// Propositional variable for "point t has color c"; `t` is 1-based.
    pub fn point_var(&self, t: usize, c: usize) -> i64 {
        ((t - 1) * self.r + c + 1) as i64
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        out.push_str("c avoiding-coloring encoding\n");
        writeln!(out, "c variable (t-1)*{} + c + 1 <=> point t has color c", self.r).unwrap();
        writeln!(out, "c points 1..{} colors 0..{}", self.n, self.r - 1).unwrap();
        writeln!(out, "p cnf {} {}", self.n_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Build the DIMACS encoding: one-hot color per point plus, for every
/// witness assignment within bounds, a clause per color forbidding its
/// monochromatic point set.
pub fn export_cnf(
    system: &LinearSystem,
    r: usize,
    n: usize,
    var_bound: usize,
    clause_cap: usize,
) -> Result<CnfDocument, SearchError> {
    if var_bound < 1 {
        return Err(SearchError::BadVarBound);
    }
    let engine = Engine::new(system)?;
    let constraints = Constraints {
        coloring: None,
        n: n as i64,
    };
    let domain = Domain::Range(var_bound as i64);

    // distinct monochromatic point sets over all witnesses
    let mut point_sets: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut nodes = 0u64;
    let mut assignment = Vec::with_capacity(engine.n_vars);
    let mut cap_hit = false;
    dfs(
        &engine,
        &constraints,
        &domain,
        0,
        &mut assignment,
        None,
        &mut nodes,
        &mut |a, _| {
            let points: BTreeSet<i64> = match engine.mode {
                SystemMode::Image => (0..engine.rows.len())
                    .map(|ri| engine.row_value(ri, a))
                    .collect(),
                SystemMode::Kernel => a.iter().copied().collect(),
            };
            point_sets.insert(points.into_iter().collect());
            if point_sets.len() * r > clause_cap {
                cap_hit = true;
                return true;
            }
            false
        },
    );
    if cap_hit {
        return Err(SearchError::ClauseCapExceeded {
            cap: clause_cap,
            estimate: point_sets.len() * r,
        });
    }

    let cnf_var = |t: i64, c: usize| -> i64 { (t - 1) * r as i64 + c as i64 + 1 };
    let mut clauses = Vec::new();
    for t in 1..=n {
        clauses.push((0..r).map(|c| cnf_var(t as i64, c)).collect::<Vec<_>>());
        for c1 in 0..r {
            for c2 in (c1 + 1)..r {
                clauses.push(vec![-cnf_var(t as i64, c1), -cnf_var(t as i64, c2)]);
            }
        }
    }
    for points in &point_sets {
        for c in 0..r {
            clauses.push(points.iter().map(|&t| -cnf_var(t, c)).collect());
        }
    }
    Ok(CnfDocument {
        r,
        n,
        n_vars: n * r,
        clauses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// A model, decoded and re-verified as an avoiding coloring.
    Sat(Coloring),
    Unsat,
}

/// Run an external SAT solver (SAT-competition output format) on the
/// encoding and decode + re-verify its answer. The solver command is
/// split on whitespace and given the CNF file path as its last argument.
pub fn solve_external(
    system: &LinearSystem,
    cnf: &CnfDocument,
    var_bound: usize,
    solver_command: &str,
) -> Result<SatOutcome, SearchError> {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("rado-{}.cnf", std::process::id()));
    std::fs::write(&path, cnf.to_dimacs())?;

    let mut parts = solver_command.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| SearchError::SolverFailed("empty solver command".into()))?;
    let output = Command::new(program)
        .args(parts)
        .arg(&path)
        .output()
        .map_err(|e| SearchError::SolverFailed(format!("cannot launch {program:?}: {e}")))?;
    let _ = std::fs::remove_file(&path);

    let stdout = String::from_utf8_lossy(&output.stdout);
    parse_and_verify(system, cnf, var_bound, &stdout)
}

/// Parse solver output and re-verify any model before trusting it.
pub fn parse_and_verify(
    system: &LinearSystem,
    cnf: &CnfDocument,
    var_bound: usize,
    solver_output: &str,
) -> Result<SatOutcome, SearchError> {
    let mut status: Option<bool> = None;
    let mut literals: Vec<i64> = Vec::new();
    for line in solver_output.lines() {
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                other => {
                    return Err(SearchError::SolverFailed(format!(
                        "unrecognized status line {other:?}"
                    )))
                }
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| {
                    SearchError::SolverFailed(format!("bad literal {tok:?}"))
                })?;
                if lit != 0 {
                    literals.push(lit);
                }
            }
        }
    }
    match status {
        None => Err(SearchError::SolverFailed(
            "no status line in solver output".into(),
        )),
        Some(false) => Ok(SatOutcome::Unsat),
        Some(true) => {
            let mut truth = vec![false; cnf.n_vars + 1];
            for lit in literals {
                let v = lit.unsigned_abs() as usize;
                if v <= cnf.n_vars {
                    truth[v] = lit > 0;
                }
            }
            let mut colors = Vec::with_capacity(cnf.n);
            for t in 1..=cnf.n {
                let c = (0..cnf.r)
                    .find(|&c| truth[cnf.point_var(t, c) as usize])
                    .ok_or_else(|| {
                        SearchError::ModelInvalid(format!("point {t} has no color in the model"))
                    })?;
                colors.push(c as u8);
            }
            let coloring = Coloring::new(cnf.r, colors)?;
            if let Some(w) = mono_witness(system, &coloring, var_bound)? {
                return Err(SearchError::ModelInvalid(format!(
                    "decoded coloring admits a witness with image {:?}",
                    w.image_values
                )));
            }
            Ok(SatOutcome::Sat(coloring))
        }
    }
}

/// Minimal DPLL for DIMACS files, exposed so the CLI can act as the
/// external solver in self-contained runs. Returns a model or None.
pub fn dpll(n_vars: usize, clauses: &[Vec<i64>]) -> Option<Vec<bool>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Val {
        Unset,
        True,
        False,
    }
    fn lit_val(assign: &[Val], lit: i64) -> Val {
        match assign[lit.unsigned_abs() as usize] {
            Val::Unset => Val::Unset,
            Val::True => {
                if lit > 0 {
                    Val::True
                } else {
                    Val::False
                }
            }
            Val::False => {
                if lit > 0 {
                    Val::False
                } else {
                    Val::True
                }
            }
        }
    }
    fn solve(mut assign: Vec<Val>, clauses: &[Vec<i64>]) -> Option<Vec<Val>> {
        // unit propagation to fixpoint
        loop {
            let mut unit: Option<i64> = None;
            for clause in clauses {
                let mut unassigned = None;
                let mut n_unassigned = 0;
                let mut satisfied = false;
                for &lit in clause {
                    match lit_val(&assign, lit) {
                        Val::True => {
                            satisfied = true;
                            break;
                        }
                        Val::Unset => {
                            n_unassigned += 1;
                            unassigned = Some(lit);
                        }
                        Val::False => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match n_unassigned {
                    0 => return None, // conflict
                    1 => {
                        unit = unassigned;
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(lit) => {
                    let v = lit.unsigned_abs() as usize;
                    assign[v] = if lit > 0 { Val::True } else { Val::False };
                }
                None => break,
            }
        }
        match assign.iter().skip(1).position(|v| *v == Val::Unset) {
            None => Some(assign),
            Some(i) => {
                let v = i + 1;
                for val in [Val::True, Val::False] {
                    let mut next = assign.clone();
                    next[v] = val;
                    if let Some(model) = solve(next, clauses) {
                        return Some(model);
                    }
                }
                None
            }
        }
    }
    solve(vec![Val::Unset; n_vars + 1], clauses)
        .map(|assign| assign[1..].iter().map(|v| *v == Val::True).collect())
}

/// Parse a DIMACS CNF file body.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i64>>), SearchError> {
    let mut n_vars = 0usize;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut seen_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let mut it = rest.split_whitespace();
            n_vars = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| SearchError::SolverFailed("bad p line".into()))?;
            seen_header = true;
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| SearchError::SolverFailed(format!("bad token {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !seen_header {
        return Err(SearchError::SolverFailed("missing p cnf header".into()));
    }
    Ok((n_vars, clauses))
}

/// The classical small image systems used throughout the tests.
pub mod classic {
    use super::*;
    use crate::matrix::SparseIntMatrix;

    /// Schur triples as an image system: rows x, y, x + y.
    pub fn schur_image() -> LinearSystem {
        LinearSystem {
            variables: vec![VarName::X(1, 1), VarName::X(2, 1)],
            matrix: SparseIntMatrix::from_dense_rows(&[
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
            ]),
            mode: SystemMode::Image,
            coeffs: vec![],
        }
    }

    /// 3-term arithmetic progressions: rows a, a + d, a + 2d.
    pub fn ap3_image() -> LinearSystem {
        LinearSystem {
            variables: vec![VarName::X(1, 1), VarName::X(2, 1)],
            matrix: SparseIntMatrix::from_dense_rows(&[
                vec![1, 0],
                vec![1, 1],
                vec![1, 2],
            ]),
            mode: SystemMode::Image,
            coeffs: vec![],
        }
    }
}
