//! Step-by-step executor for the constructive partition-regularity
//! argument, run against a concrete coloring of a finite window.
//!
//! The pipeline is: subgroup reduction, dense-class census, a Rado-style
//! search for the finite part of the system inside a progression, a
//! divisibility check on `y`, a sumset extension for each larger block,
//! and a final verification that re-evaluates the full image from scratch.
//! A success trace ends with a verified witness; a failure trace names the
//! first failed step. No witness is ever emitted unverified.

use crate::coloring::{Coloring, ColoringError};
use crate::matrix::evaluate_image;
use crate::search::{mono_witness_in, ImageWitness, SearchError};
use crate::systems::{gen_dh_truncation, gen_finite_system, SystemError, VarName};
use crate::windows::{find_progression, lcm_bound, Window, WindowError, WindowSet};
use num_bigint::BigInt;
use num_rational::Rational64;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum ProofError {
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("invalid parameter: {0}")]
    BadParam(String),
}

/// Tunables for the executor; every value is echoed into the trace.
#[derive(Debug, Clone, Serialize)]
pub struct ProofParams {
    /// Subgroups of index up to this are considered during reduction.
    pub q_max: i64,
    /// Largest progression length tried in the Rado step.
    pub l_max: usize,
    /// Dense-class threshold; None means `1 / (2 * present classes)`.
    pub theta: Option<(i64, i64)>,
}

impl Default for ProofParams {
    fn default() -> Self {
        Self {
            q_max: 12,
            l_max: 64,
            theta: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ProofStep {
    pub name: String,
    pub detail: serde_json::Value,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
    pub success: bool,
    /// Present only on success: the verified assignment and image, in the
    /// original (unreduced) coordinates.
    pub witness: Option<serde_json::Value>,
}

impl ProofTrace {
    fn push_ok(&mut self, name: &str, detail: serde_json::Value) {
        self.steps.push(ProofStep {
            name: name.into(),
            detail,
            ok: true,
        });
    }

    fn fail(mut self, name: &str, detail: serde_json::Value) -> Self {
        self.steps.push(ProofStep {
            name: name.into(),
            detail,
            ok: false,
        });
        self.success = false;
        self
    }

    pub fn first_failure(&self) -> Option<&ProofStep> {
        self.steps.iter().find(|s| !s.ok)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let mark = if step.ok { "ok " } else { "FAIL" };
            out.push_str(&format!("[{}] {}: {}\n", mark, step.name, step.detail));
        }
        out.push_str(if self.success {
            "result: success\n"
        } else {
            "result: failure\n"
        });
        out
    }
}

/// Result of the subgroup-reduction loop.
#[derive(Debug, Clone)]
pub struct SubgroupReduction {
    pub coloring: Coloring,
    /// Product of the moduli used; points of the reduced window map to
    /// `multiplier * i` in the original.
    pub multiplier: i64,
    /// (modulus, class removed) per round.
    pub rounds: Vec<(i64, usize)>,
    /// True when the window became too small to certify "contains no
    /// multiple" robustly.
    pub inconclusive: bool,
}

/// Repeatedly find a color class containing no multiple of some `q <=
/// q_max` within the window, restrict to `q . N` rescaled, and drop that
/// class. "Robust" certification requires the window to exhibit at least
/// `q_max` multiples of the candidate modulus.
pub fn subgroup_reduce(coloring: &Coloring, q_max: i64) -> Result<SubgroupReduction, ProofError> {
    if q_max < 1 {
        return Err(ProofError::BadParam(format!("q_max = {q_max}")));
    }
    let mut current = coloring.clone();
    let mut multiplier = 1i64;
    let mut rounds = Vec::new();
    loop {
        let n = current.n() as i64;
        let present = current.present_colors();
        if present.len() <= 1 {
            break;
        }
        let mut reduced = false;
        'scan: for q in 2..=q_max {
            if n / q < q_max {
                // too few multiples in window to certify absence
                return Ok(SubgroupReduction {
                    coloring: current,
                    multiplier,
                    rounds,
                    inconclusive: true,
                });
            }
            for &class in &present {
                let has_multiple = (1..=(n / q)).any(|i| {
                    current.color(q * i).expect("in window") == class
                });
                if !has_multiple {
                    current = current.restrict_to_multiples(q as usize);
                    multiplier *= q;
                    rounds.push((q, class));
                    reduced = true;
                    break 'scan;
                }
            }
        }
        if !reduced {
            break;
        }
    }
    Ok(SubgroupReduction {
        coloring: current,
        multiplier,
        rounds,
        inconclusive: false,
    })
}

/// Window-proxy densities, the dense classes, and the derived parameters
/// `d`, `m`, `N`.
#[derive(Debug, Clone)]
pub struct DenseCensus {
    pub densities: Vec<(usize, Rational64)>,
    pub dense_classes: Vec<usize>,
    pub theta: Rational64,
    pub d: Rational64,
    pub m: i64,
    pub big_n: usize,
}

pub fn dense_census(
    coloring: &Coloring,
    proxy_n: usize,
    theta: Option<Rational64>,
) -> Result<DenseCensus, ProofError> {
    if proxy_n < 1 || proxy_n > coloring.n() {
        return Err(ProofError::BadParam(format!(
            "proxy_n = {proxy_n} outside window"
        )));
    }
    let present = coloring.present_colors();
    let theta = theta.unwrap_or_else(|| Rational64::new(1, 2 * present.len() as i64));
    let densities: Vec<(usize, Rational64)> = present
        .iter()
        .map(|&c| {
            (
                c,
                Rational64::new(coloring.count_in_prefix(c, proxy_n) as i64, proxy_n as i64),
            )
        })
        .collect();
    let dense_classes: Vec<usize> = densities
        .iter()
        .filter(|(_, d)| *d >= theta)
        .map(|(c, _)| *c)
        .collect();
    let d = densities
        .iter()
        .filter(|(c, _)| dense_classes.contains(c))
        .map(|(_, d)| *d)
        .min()
        .ok_or_else(|| {
            ProofError::BadParam(format!(
                "no class reaches the dense threshold {theta} at proxy_n = {proxy_n}"
            ))
        })?;
    let m = lcm_bound(d)?;
    // N = ceil(2/d) - 1 with d = p/q: ceil(2q/p) - 1
    let big_n = (2 * d.denom() + d.numer() - 1) / d.numer() - 1;
    Ok(DenseCensus {
        densities,
        dense_classes,
        theta,
        d,
        m,
        big_n: big_n.max(1) as usize,
    })
}

#[derive(Debug, Clone)]
pub struct RadoSolution {
    pub y: i64,
    pub x: BTreeMap<VarName, i64>,
    pub color: usize,
    pub c: i64,
    pub l: usize,
    pub witness: ImageWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadoFailure {
    NoQualifyingProgression { l_max: usize },
    NoSolutionInProgression { largest_c: i64, largest_l: usize },
}

/// Search progressions `mc . [l]` (c from the progression finder, l up to
/// `l_max`) for a solution of the auxiliary finite kernel system that is
/// monochromatic in a dense class, with `m | y`.
pub fn rado_step(
    coloring: &Coloring,
    a: &[i64],
    big_n: usize,
    m: i64,
    dense_classes: &[usize],
    l_max: usize,
) -> Result<Result<RadoSolution, RadoFailure>, ProofError> {
    let system = gen_finite_system(big_n, a)?;
    let mut tried_any = false;
    let mut largest = (0i64, 0usize);
    for l in 1..=l_max {
        let ml = m as usize * l;
        let Some(c) = find_progression(coloring, ml, dense_classes)? else {
            continue;
        };
        tried_any = true;
        largest = (c, l);
        let allowed: Vec<i64> = (1..=l as i64).map(|j| m * c * j).collect();
        if let Some(witness) = mono_witness_in(&system, coloring, &allowed)? {
            let y = witness.assignment[&VarName::Y];
            debug_assert_eq!(y % m, 0, "progression values are multiples of m");
            let x: BTreeMap<VarName, i64> = witness
                .assignment
                .iter()
                .filter(|(v, _)| matches!(v, VarName::X(_, _)))
                .map(|(v, x)| (*v, *x))
                .collect();
            return Ok(Ok(RadoSolution {
                y,
                x,
                color: witness.color,
                c,
                l,
                witness,
            }));
        }
    }
    Ok(Err(if tried_any {
        RadoFailure::NoSolutionInProgression {
            largest_c: largest.0,
            largest_l: largest.1,
        }
    } else {
        RadoFailure::NoQualifyingProgression { l_max }
    }))
}

/// Assignment for one extension block.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BlockExtension {
    pub n: usize,
    pub xt: Vec<i64>,
    pub z: i64,
    pub x: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendFailure {
    /// No representation found in the window for this block; the window
    /// may simply be too small.
    WindowExhausted { n: usize },
    NotDivisible { y: i64, m: i64 },
}

/// For each `n` in `(big_n, n_max]`, find `z_n` and `xt_{n1..nn}` in
/// `A_{> a_n y}` with `z_n = sum xt_{ni} - n a_n y`, and set
/// `x_{ni} = xt_{ni} - a_n y`. The first `n-1` coordinates are the least
/// element of `A_{> a_n y}`; the last coordinate scans upward until the
/// induced `z_n` lands in the set.
pub fn sumset_extend(
    a_class: &WindowSet,
    y: i64,
    m: i64,
    a: &[i64],
    big_n: usize,
    n_max: usize,
) -> Result<Result<Vec<BlockExtension>, ExtendFailure>, ProofError> {
    if y % m != 0 {
        return Ok(Err(ExtendFailure::NotDivisible { y, m }));
    }
    let mut out = Vec::new();
    for n in (big_n + 1)..=n_max {
        let a_n = a[n - 1];
        let t = a_n * y;
        let elements: Vec<i64> = a_class.iter().filter(|v| *v > t).collect();
        let Some(&least) = elements.first() else {
            return Ok(Err(ExtendFailure::WindowExhausted { n }));
        };
        let base_sum = least * (n as i64 - 1);
        let shift = (n as i64) * a_n * y;
        let mut found = None;
        for &last in &elements {
            let z = base_sum + last - shift;
            if z > t && a_class.contains(z) {
                found = Some((last, z));
                break;
            }
        }
        let Some((last, z)) = found else {
            return Ok(Err(ExtendFailure::WindowExhausted { n }));
        };
        let mut xt = vec![least; n - 1];
        xt.push(last);
        let x: Vec<i64> = xt.iter().map(|v| v - a_n * y).collect();
        debug_assert!(x.iter().all(|v| *v >= 1));
        out.push(BlockExtension { n, xt, z, x });
    }
    Ok(Ok(out))
}

fn rational_json(r: Rational64) -> serde_json::Value {
    serde_json::json!(format!("{}/{}", r.numer(), r.denom()))
}

/// Execute the full constructive argument against `coloring` and return a
/// trace; on success the trace carries a witness for the truncated image
/// system, verified independently via exact matrix evaluation and raw
/// color lookups in the original coloring.
///
/// ```
/// use rado::coloring::Coloring;
/// use rado::proof::{execute_proof, ProofParams};
///
/// let parity = Coloring::residue(10_000, 2);
/// let trace = execute_proof(&parity, &[1, 2], 2, &ProofParams::default()).unwrap();
/// assert!(trace.success);
/// assert!(trace.witness.is_some());
/// assert!(trace.steps.iter().all(|s| s.ok));
/// ```
pub fn execute_proof(
    coloring: &Coloring,
    a: &[i64],
    n_max: usize,
    params: &ProofParams,
) -> Result<ProofTrace, ProofError> {
    if a.len() < n_max || n_max < 1 {
        return Err(ProofError::BadParam(format!(
            "need n_max >= 1 and {n_max} coefficients, got {}",
            a.len()
        )));
    }
    let mut trace = ProofTrace {
        steps: Vec::new(),
        success: true,
        witness: None,
    };

    // subgroup-reduction
    let reduction = subgroup_reduce(coloring, params.q_max)?;
    let detail = serde_json::json!({
        "multiplier": reduction.multiplier,
        "rounds": reduction.rounds,
        "reduced_window": reduction.coloring.n(),
        "q_max": params.q_max,
    });
    if reduction.inconclusive {
        return Ok(trace.fail("subgroup-reduction", serde_json::json!({
            "reason": "window too small to certify subgroup avoidance",
            "partial": detail,
        })));
    }
    trace.push_ok("subgroup-reduction", detail);
    let reduced = &reduction.coloring;

    // dense-class-census + compute-d-m-N
    let proxy_n = reduced.n();
    let theta = params.theta.map(|(p, q)| Rational64::new(p, q));
    let census = match dense_census(reduced, proxy_n, theta) {
        Ok(c) => c,
        Err(e) => {
            return Ok(trace.fail(
                "dense-class-census",
                serde_json::json!({ "reason": e.to_string() }),
            ))
        }
    };
    trace.push_ok(
        "dense-class-census",
        serde_json::json!({
            "proxy_n": proxy_n,
            "theta": rational_json(census.theta),
            "densities": census.densities.iter()
                .map(|(c, d)| (c, rational_json(*d)))
                .collect::<Vec<_>>(),
            "dense_classes": census.dense_classes,
        }),
    );
    trace.push_ok(
        "compute-d-m-N",
        serde_json::json!({
            "d": rational_json(census.d),
            "m": census.m,
            "N": census.big_n,
        }),
    );

    // the finite part only needs blocks up to n_max
    let big_n = census.big_n.min(n_max);

    // rado-step
    let rado = match rado_step(
        reduced,
        a,
        big_n,
        census.m,
        &census.dense_classes,
        params.l_max,
    )? {
        Ok(sol) => sol,
        Err(failure) => {
            let reason = match failure {
                RadoFailure::NoQualifyingProgression { l_max } => format!(
                    "no qualifying progression for any l <= {l_max}"
                ),
                RadoFailure::NoSolutionInProgression {
                    largest_c,
                    largest_l,
                } => format!(
                    "no solution found; largest progression tried c = {largest_c}, l = {largest_l}"
                ),
            };
            return Ok(trace.fail("rado-step", serde_json::json!({ "reason": reason })));
        }
    };
    trace.push_ok(
        "rado-step",
        serde_json::json!({
            "y": rado.y,
            "c": rado.c,
            "l": rado.l,
            "color": rado.color,
            "x": rado.x.iter().map(|(v, x)| (v.to_string(), *x))
                .collect::<BTreeMap<String, i64>>(),
        }),
    );

    // divisibility-check
    if rado.y % census.m != 0 {
        return Ok(trace.fail(
            "divisibility-check",
            serde_json::json!({ "y": rado.y, "m": census.m }),
        ));
    }
    trace.push_ok(
        "divisibility-check",
        serde_json::json!({ "y": rado.y, "m": census.m }),
    );

    // sumset-extension per n > N
    let window = Window::new(1, reduced.n() as i64)?;
    let members = (1..=reduced.n() as i64)
        .filter(|&i| reduced.color(i).expect("in window") == rado.color);
    let a_class = WindowSet::from_members(window, members)?;
    let extensions = match sumset_extend(&a_class, rado.y, census.m, a, big_n, n_max)? {
        Ok(ext) => ext,
        Err(failure) => {
            let (name, detail) = match failure {
                ExtendFailure::WindowExhausted { n } => (
                    format!("sumset-extension n={n}"),
                    serde_json::json!({
                        "reason": "no representation in window; window-inconclusive",
                        "n": n,
                    }),
                ),
                ExtendFailure::NotDivisible { y, m } => (
                    "sumset-extension".to_string(),
                    serde_json::json!({ "reason": format!("m = {m} does not divide y = {y}") }),
                ),
            };
            return Ok(trace.fail(&name, detail));
        }
    };
    for ext in &extensions {
        trace.push_ok(
            &format!("sumset-extension n={}", ext.n),
            serde_json::to_value(ext).expect("serializable"),
        );
    }

    // assemble the full assignment in reduced coordinates, then map back
    let mult = reduction.multiplier;
    let mut assignment: BTreeMap<VarName, i64> = BTreeMap::new();
    assignment.insert(VarName::Y, rado.y * mult);
    for (v, x) in &rado.x {
        assignment.insert(*v, x * mult);
    }
    for ext in &extensions {
        for (i, x) in ext.x.iter().enumerate() {
            assignment.insert(VarName::X(ext.n, i + 1), x * mult);
        }
    }

    // positivity-check
    let min_value = assignment.values().copied().min().expect("nonempty");
    if min_value < 1 {
        return Ok(trace.fail(
            "positivity-check",
            serde_json::json!({ "min_value": min_value }),
        ));
    }
    trace.push_ok(
        "positivity-check",
        serde_json::json!({ "min_value": min_value }),
    );

    // final-verification: exact evaluation + raw color lookup against the
    // ORIGINAL coloring, trusting nothing from the steps above
    let system = gen_dh_truncation(n_max, a)?;
    let x_vec: Vec<BigInt> = system
        .variables
        .iter()
        .map(|v| BigInt::from(assignment[v]))
        .collect();
    let image = evaluate_image(&system.matrix, &x_vec).map_err(SystemError::from)?;
    let mut image_i64 = Vec::with_capacity(image.len());
    let mut common_color: Option<usize> = None;
    for value in &image {
        let v = i64::try_from(value.clone()).map_err(|_| {
            ProofError::BadParam("image value exceeds i64".into())
        })?;
        image_i64.push(v);
        if v < 1 || v > coloring.n() as i64 {
            return Ok(trace.fail(
                "final-verification",
                serde_json::json!({ "reason": format!("image value {v} outside window") }),
            ));
        }
        let color = coloring.color(v)?;
        match common_color {
            None => common_color = Some(color),
            Some(c) if c == color => {}
            Some(c) => {
                return Ok(trace.fail(
                    "final-verification",
                    serde_json::json!({
                        "reason": format!("image value {v} has color {color}, expected {c}")
                    }),
                ));
            }
        }
    }
    let color = common_color.expect("system has rows");
    trace.push_ok(
        "final-verification",
        serde_json::json!({ "rows": image.len(), "color": color }),
    );
    let witness = ImageWitness {
        assignment,
        image_values: image_i64,
        color,
    };
    trace.witness = Some(witness.to_json());
    Ok(trace)
}
